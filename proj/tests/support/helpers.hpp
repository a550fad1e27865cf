#pragma once

#include "conik/barrier.hpp"
#include "conik/duality.hpp"

#include <random>
#include <vector>

namespace conik::testing {

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = normal(rng);
  }
  return M;
}

inline SymMatrix random_spd(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXd M = random_matrix(n, n, rng);
  return M * M.transpose() + Eigen::MatrixXd::Identity(n, n);
}

inline SymMatrix random_sym(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXd M = random_matrix(n, n, rng);
  return 0.5 * (M + M.transpose());
}

// Independent finite-difference oracles for barrier derivatives.
inline Vector fd_gradient(const Barrier& F, const Vector& x, double step) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    g(i) = (F.cone().value(xp) - F.cone().value(xm)) / (2.0 * step);
  }
  return g;
}

inline SymMatrix fd_hessian(const Barrier& F, const Vector& x, double step) {
  SymMatrix H(x.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    H.col(i) = (F.cone().gradient(xp) - F.cone().gradient(xm)) / (2.0 * step);
  }
  return SymMatrix(0.5 * (H + H.transpose()));
}

// The catalog every property suite samples over.
inline std::vector<ConePtr> cone_catalog() {
  return {
      make_orthant(4),
      make_weighted_orthant((Vector(2) << 2.0, 2.0).finished()),
      make_psd(3),
      make_soc({3}),
      make_exp(1),
      make_toeplitz_tridiag(5),
      make_product({make_orthant(2), make_soc({2})}),
  };
}

inline std::vector<ConePtr> negative_curvature_catalog() {
  std::vector<ConePtr> out;
  for (auto& k : cone_catalog()) {
    if (k->negative_curvature()) out.push_back(k);
  }
  return out;
}

inline std::vector<ConePtr> symmetric_catalog() {
  std::vector<ConePtr> out;
  for (auto& k : cone_catalog()) {
    if (k->symmetric_kind()) out.push_back(k);
  }
  return out;
}

}  // namespace conik::testing
