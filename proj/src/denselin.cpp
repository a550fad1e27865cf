#include "conik/denselin.hpp"

#include <cmath>

namespace conik {

bool is_symmetric(const SymMatrix& M, double rel_tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = rel_scale(M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

void require_symmetric(const SymMatrix& M, const char* who) {
  if (!is_symmetric(M)) {
    throw DomainError(std::string(who) + ": matrix is not symmetric");
  }
}

CholFactor chol_factor(const SymMatrix& M) {
  require_symmetric(M, "chol_factor");
  const int n = static_cast<int>(M.rows());
  CholFactor out;
  out.L = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = M(j, j) - out.L.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) {
      out.ok = false;
      out.failed_pivot = j;
      return out;
    }
    d = std::sqrt(d);
    out.L(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      out.L(i, j) = (M(i, j) - out.L.row(i).head(j).dot(out.L.row(j).head(j))) / d;
    }
  }
  out.ok = true;
  return out;
}

Vector chol_solve(const CholFactor& F, const Vector& b) {
  if (!F.ok) throw DomainError("chol_solve: factorization failed");
  Vector y = F.L.triangularView<Eigen::Lower>().solve(b);
  return F.L.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd chol_solve(const CholFactor& F, const Eigen::MatrixXd& B) {
  if (!F.ok) throw DomainError("chol_solve: factorization failed");
  Eigen::MatrixXd y = F.L.triangularView<Eigen::Lower>().solve(B);
  return F.L.transpose().triangularView<Eigen::Upper>().solve(y);
}

SymMatrix chol_inverse(const CholFactor& F) {
  if (!F.ok) throw DomainError("chol_inverse: factorization failed");
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(F.L.rows(), F.L.cols());
  Eigen::MatrixXd inv = chol_solve(F, eye);
  return 0.5 * (inv + inv.transpose());
}

double chol_log_det(const CholFactor& F) {
  if (!F.ok) throw DomainError("chol_log_det: factorization failed");
  return 2.0 * F.L.diagonal().array().log().sum();
}

GenEigResult geneig_max(const SymMatrix& A, const SymMatrix& B) {
  require_symmetric(A, "geneig_max");
  if (A.rows() != B.rows()) throw DimensionError("geneig_max: dimension mismatch");
  CholFactor F = chol_factor(B);
  if (!F.ok) {
    throw DomainError("geneig_max: B is not positive definite (pivot " +
                      std::to_string(F.failed_pivot) + ")");
  }
  // C = L^{-1} A L^{-T} shares eigenvalues with B^{-1} A.
  Eigen::MatrixXd C = F.L.triangularView<Eigen::Lower>().solve(A);
  C = F.L.triangularView<Eigen::Lower>().solve(C.transpose()).eval();
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw InternalConsistencyError("geneig_max: eigensolver failed");
  const int last = static_cast<int>(C.rows()) - 1;
  GenEigResult out;
  out.lambda_max = es.eigenvalues()(last);
  Vector q = F.L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(last));
  out.vec = q / q.norm();
  return out;
}

double min_eig_diff(const SymMatrix& A, const SymMatrix& B) {
  require_symmetric(A, "min_eig_diff");
  require_symmetric(B, "min_eig_diff");
  if (A.rows() != B.rows()) throw DimensionError("min_eig_diff: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B - A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InternalConsistencyError("min_eig_diff: eigensolver failed");
  return es.eigenvalues()(0);
}

}  // namespace conik
