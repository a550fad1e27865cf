#include "conik/worstcase.hpp"

#include "conik/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace conik {

namespace {

constexpr double kGolden = 0.6180339887498949;

template <class Fn>
double golden_min(Fn f, double lo, double hi, int iters = 200) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iters && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++k) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Orthonormal basis of the hyperplane normal to s.
Eigen::MatrixXd null_basis(const Vector& s) {
  const int n = static_cast<int>(s.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(n - 1);
}

}  // namespace

double ratio_R(const PrimalDualPair& pair, const Vector& v) {
  if (v.norm() == 0.0) throw DomainError("ratio_R: v must be nonzero");
  const SymMatrix Hxt = pair.cone().hessian(pair.x_shadow);  // F''_*(s)^{-1}
  const SymMatrix Hx = pair.cone().hessian(pair.x);
  return v.dot(Hxt * v) / v.dot(Hx * v);
}

VspaceResult vspace_xi_orthant(int n) {
  if (n < 2) throw DomainError("vspace_xi_orthant: need n >= 2");
  const double tau2 = static_cast<double>(n) / (n - 1.0);
  const auto f = [&](double alpha) {
    return 1.0 + (n - 1.0) / (tau2 * (alpha - 1.0) + 1.0) - (n - 1.0) / alpha;
  };
  const auto fprime = [&](double alpha) {
    const double den = tau2 * (alpha - 1.0) + 1.0;
    return -(n - 1.0) * tau2 / (den * den) + (n - 1.0) / (alpha * alpha);
  };
  // golden bracket, then bisection on the derivative for full precision
  double alpha = golden_min(f, 1.0, 4.0);
  {
    double lo = std::max(1.0, alpha - 1e-3), hi = alpha + 1e-3;
    while (fprime(lo) > 0.0 && lo > 1.0) lo = std::max(1.0, lo - 1e-2);
    while (fprime(hi) < 0.0) hi += 1e-2;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fprime(mid) < 0.0 ? lo : hi) = mid;
    }
    alpha = 0.5 * (lo + hi);
  }
  const double fopt = f(alpha);

  if (n <= 10) {
    // Descent on the unreduced variables (v_1..v_{n-1} >= 1, alpha eliminated).
    Vector v = Vector::Constant(n - 1, 2.0);
    const auto g = [&](const Vector& w) {
      return 1.0 + w.cwiseInverse().sum() - n * (n - 1.0) / (1.0 + w.sum());
    };
    double cur = g(v);
    double step = 0.5;
    for (int it = 0; it < 4000 && step > 1e-13; ++it) {
      Vector grad = -v.cwiseAbs2().cwiseInverse();
      grad.array() += n * (n - 1.0) / std::pow(1.0 + v.sum(), 2);
      Vector trial = (v - step * grad).cwiseMax(1.0);
      const double val = g(trial);
      if (val < cur) {
        v = trial;
        cur = val;
        step *= 1.2;
      } else {
        step *= 0.5;
      }
    }
    if (std::abs(cur - fopt) > 1e-8 * rel_scale(std::abs(fopt))) {
      throw InternalConsistencyError("vspace_xi_orthant: descent disagrees with the reduction");
    }
  }

  VspaceResult out;
  out.alpha_opt = alpha;
  out.xi = 1.0 / fopt;
  out.v_opt = Vector::Constant(n, tau2 * (alpha - 1.0) + 1.0);
  out.v_opt(n - 1) = 1.0;
  return out;
}

Vector worstcase_orthant(int n, const Vector& s, int i, double mu) {
  if (n < 2 || s.size() != n) throw DomainError("worstcase_orthant: bad dimensions");
  if (i < 1 || i > n) throw DomainError("worstcase_orthant: index out of range");
  if (!(mu > 0.0) || s.minCoeff() <= 0.0) throw DomainError("worstcase_orthant: need s > 0, mu > 0");
  const double tau = tau_rho(n).tau;
  Vector x(n);
  for (int j = 0; j < n; ++j) {
    const double xt = 1.0 / s(j);
    x(j) = (j == i - 1) ? (tau / (tau + 1.0)) * mu * xt : tau * mu * xt;
  }
  return x;
}

double weighted_orthant_xi_sup(double c) {
  if (!(c >= 1.0)) throw DomainError("weighted_orthant_xi_sup: need c >= 1");
  const auto f = [&](double v) { return c / v + c - 2.0 * (2.0 * c - 1.0) / (v + 1.0); };
  const double v = golden_min(f, 1.0, 100.0);
  return 1.0 / f(v);
}

// ---------------------------------------------------------------------------
// Extreme-direction search on the slice <s, v> = mu theta
// ---------------------------------------------------------------------------

namespace {

struct SliceGeometry {
  Vector center;  // mu x~
  Eigen::MatrixXd basis;
  SymMatrix H;  // F''(x~)
  double mu, theta;
};

double slice_norm_sq(const SliceGeometry& geo, const Vector& v) {
  return v.dot(geo.H * v) / (geo.mu * geo.mu) - geo.theta;
}

// Pull a slice point back into the cone toward the center.
Vector pull_inside(const Cone& K, const SliceGeometry& geo, const Vector& v) {
  const Vector d = v - geo.center;
  const double sigma = gauge_sigma(K, geo.center, -d);
  if (sigma <= 1.0) return v;
  return geo.center + d / sigma;
}

}  // namespace

ExtremeVResult extreme_v_search(const Barrier& F, const Vector& s, double mu, int n_starts,
                                std::uint64_t seed) {
  const Cone& K = F.cone();
  const double theta = F.theta();
  SliceGeometry geo;
  geo.mu = mu;
  geo.theta = theta;
  const Vector x_shadow = shadow_primal(F, s);
  geo.center = mu * x_shadow;
  geo.H = K.hessian(x_shadow);
  geo.basis = null_basis(s);

  ExtremeVResult out;
  out.target_norm_sq = theta * (theta - 1.0);

  std::vector<Vector> candidates;
  const auto push_candidate = [&](const Vector& v) {
    const double ns = slice_norm_sq(geo, v);
    if (std::sqrt(std::max(0.0, v.dot(geo.H * v))) > theta * mu * (1.0 + 1e-9)) {
      throw InternalConsistencyError("extreme_v_search: feasible v exceeds the norm bound");
    }
    if (ns > out.best_norm_sq || out.best.size() == 0) {
      out.best_norm_sq = ns;
      out.best = v;
    }
    candidates.push_back(v);
  };

  const int slice_dim = K.dim() - 1;
  const auto boundary_at = [&](const Vector& dir) {
    const double sigma = gauge_sigma(K, geo.center, -dir);
    if (sigma <= 0.0) {
      throw InternalConsistencyError("extreme_v_search: slice is unbounded");
    }
    return Vector(geo.center + dir / sigma);
  };

  if (slice_dim == 1) {
    const Vector d = geo.basis.col(0);
    push_candidate(boundary_at(d));
    push_candidate(boundary_at(-d));
  } else if (slice_dim == 2) {
    // Dense polar scan of the boundary curve, then a golden polish of each
    // local maximum of the quadratic objective.
    const int grid = 1440;
    const auto at_angle = [&](double th) {
      return boundary_at(geo.basis.col(0) * std::cos(th) + geo.basis.col(1) * std::sin(th));
    };
    std::vector<double> phi(grid);
    for (int k = 0; k < grid; ++k) {
      const Vector v = at_angle(2.0 * M_PI * k / grid);
      phi[k] = v.dot(geo.H * v);
    }
    for (int k = 0; k < grid; ++k) {
      const double prev = phi[(k + grid - 1) % grid], next = phi[(k + 1) % grid];
      if (phi[k] > prev && phi[k] >= next) {
        const double th0 = 2.0 * M_PI * (k - 1) / grid, th1 = 2.0 * M_PI * (k + 1) / grid;
        const double th = golden_min(
            [&](double t) {
              const Vector v = at_angle(t);
              return -v.dot(geo.H * v);
            },
            th0, th1, 120);
        push_candidate(at_angle(th));
      }
    }
  }

  // Multi-start projected ascent (any slice dimension).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int start = 0; start < n_starts; ++start) {
    Vector z = Vector::Zero(slice_dim);
    Vector dir(slice_dim);
    for (int i = 0; i < slice_dim; ++i) dir(i) = normal(rng);
    dir.normalize();
    const Vector b0 = boundary_at(geo.basis * dir);
    double step = 0.5 * (b0 - geo.center).norm();
    Vector v = geo.center + 0.5 * (b0 - geo.center);
    z = geo.basis.transpose() * (v - geo.center);
    double value = v.dot(geo.H * v);
    for (int it = 0; it < 500 && step > 1e-13 * (1.0 + geo.center.norm()); ++it) {
      Vector g = geo.basis.transpose() * (2.0 * geo.H * v);
      const double gn = g.norm();
      if (gn == 0.0) break;
      Vector trial_z = z + (step / gn) * g;
      Vector trial = pull_inside(K, geo, geo.center + geo.basis * trial_z);
      const double trial_value = trial.dot(geo.H * trial);
      if (trial_value > value * (1.0 + 1e-15)) {
        v = trial;
        z = geo.basis.transpose() * (v - geo.center);
        value = trial_value;
        step *= 1.3;
      } else {
        step *= 0.5;
      }
    }
    push_candidate(v);
  }

  // Keep the candidates attaining the norm condition, deduplicated.
  const double slack = 1e-6 * rel_scale(out.target_norm_sq);
  for (const auto& v : candidates) {
    if (slice_norm_sq(geo, v) < out.target_norm_sq - slack) continue;
    bool dup = false;
    for (const auto& kept : out.maximizers) {
      if ((kept - v).norm() <= 1e-5 * (1.0 + kept.norm())) {
        dup = true;
        break;
      }
    }
    if (!dup) out.maximizers.push_back(v);
  }
  out.found = !out.maximizers.empty();
  return out;
}

WorstCaseCertificate hatx_construct(const Barrier& F, const Vector& s, const Vector& v,
                                    double mu) {
  const Cone& K = F.cone();
  const double theta = F.theta();
  const double tau = tau_rho(theta).tau;
  const Vector x_shadow = shadow_primal(F, s);
  const Vector center = mu * x_shadow;
  const SymMatrix Hxt = K.hessian(x_shadow);

  WorstCaseCertificate cert;
  cert.v = v;
  const auto check = [&](const char* clause, double margin, double tol) {
    cert.checks.push_back(WorstCaseCheck{clause, margin, margin >= -tol});
  };

  const Vector dv = v - center;
  cert.v_norm_sq = dv.dot(Hxt * dv) / (mu * mu);
  const double target = theta * (theta - 1.0);
  check("v_norm_sq", -std::abs(cert.v_norm_sq - target) / rel_scale(target), 1e-7);
  check("v_on_slice", -std::abs(s.dot(v) - mu * theta) / rel_scale(mu * theta), 1e-9);
  check("v_in_cone", K.contains(v, 1e-9).verdict != Verdict::outside ? 0.0 : -1.0, 1e-12);

  cert.x_hat = (1.0 - tau) * v + tau * center;
  const Membership xm = K.contains(cert.x_hat, 1e-12);
  check("xhat_interior", xm.verdict == Verdict::interior ? xm.margin : -1.0, 0.0);
  check("xhat_on_slice", -std::abs(s.dot(cert.x_hat) - mu * theta) / rel_scale(mu * theta), 1e-9);

  const Vector dx = cert.x_hat - center;
  cert.xhat_radius = std::sqrt(std::max(0.0, dx.dot(Hxt * dx))) / mu;
  check("xhat_radius", -std::abs(cert.xhat_radius - tau / (tau + 1.0)), 1e-8);

  cert.r = tau * (s - (Hxt * v) / (mu * theta));
  check("r_in_dual", K.dual_contains(cert.r, 1e-7).verdict != Verdict::outside ? 0.0 : -1.0,
        1e-12);

  // u inverts the hatx map on the dual side: s = (1 - tau) u + tau mu s~
  // with s~ = -F'(x_hat).
  const Vector grad_hat = K.gradient(cert.x_hat);
  cert.u = (s + tau * mu * grad_hat) / (1.0 - tau);
  check("u_in_dual", K.dual_contains(cert.u, 1e-7).verdict != Verdict::outside ? 0.0 : -1.0,
        1e-12);

  const SymMatrix Hhat = K.hessian(cert.x_hat);
  CholFactor C = chol_factor(Hhat);
  if (!C.ok) throw InternalConsistencyError("hatx_construct: F''(x_hat) not positive definite");
  cert.t = tau * (cert.x_hat - chol_solve(C, cert.u) / (mu * theta));
  check("t_in_cone", K.contains(cert.t, 1e-7).verdict != Verdict::outside ? 0.0 : -1.0, 1e-12);

  const PrimalDualPair pair = make_pair_with_shadow(F, cert.x_hat, s, x_shadow);
  cert.xi_at_xhat = xi_check_local(pair).xi_check_local;
  cert.ratio = ratio_R(pair, v);

  cert.valid = true;
  for (const auto& c : cert.checks) cert.valid = cert.valid && c.pass;
  return cert;
}

// ---------------------------------------------------------------------------
// Supremum searches
// ---------------------------------------------------------------------------

namespace {

struct Ascent {
  int evaluations = 0;
  int budget = 0;
};

// Finite-difference gradient ascent with interior rejection; objective must
// return NaN outside its domain.
template <class Fn>
double fd_ascend(Fn eval, Vector& u, double init_step, Ascent& counter) {
  const int n = static_cast<int>(u.size());
  double value = eval(u);
  ++counter.evaluations;
  if (!std::isfinite(value)) return -std::numeric_limits<double>::infinity();
  double step = init_step;
  for (int it = 0; it < 600 && counter.evaluations + 2 * n + 4 < counter.budget; ++it) {
    Vector g = Vector::Zero(n);
    const double h = 1e-6 * (1.0 + u.norm());
    for (int i = 0; i < n; ++i) {
      Vector up = u, dn = u;
      up(i) += h;
      dn(i) -= h;
      const double fu = eval(up), fd = eval(dn);
      counter.evaluations += 2;
      if (std::isfinite(fu) && std::isfinite(fd)) {
        g(i) = (fu - fd) / (2.0 * h);
      } else if (std::isfinite(fu)) {
        g(i) = (fu - value) / h;
      } else if (std::isfinite(fd)) {
        g(i) = (value - fd) / h;
      }
    }
    const double gn = g.norm();
    if (gn < 1e-14) break;
    bool accepted = false;
    for (int bt = 0; bt < 25; ++bt) {
      Vector trial = u + (step / gn) * g;
      const double tv = eval(trial);
      ++counter.evaluations;
      if (std::isfinite(tv) && tv > value + 1e-14 * std::abs(value)) {
        u = trial;
        value = tv;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.4;
    }
    if (!accepted && step < 1e-12 * (1.0 + u.norm())) break;
  }
  return value;
}

}  // namespace

SupSearchResult xi_sup_search(const Barrier& F, int n_starts, std::uint64_t seed, int budget) {
  if (budget <= 0) throw DomainError("xi_sup_search: budget must be positive");
  const Cone& K = F.cone();
  const int n = K.dim();

  // Pairs are parameterized as (x, x') with s = -F'(x'); the local measure
  // is invariant under both scalings, so no scale variable is needed.
  const auto eval = [&](const Vector& u) -> double {
    const Vector x = u.head(n), xp = u.tail(n);
    if (K.contains(x, 1e-9).verdict != Verdict::interior ||
        K.contains(xp, 1e-9).verdict != Verdict::interior) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    try {
      const Vector s = -K.gradient(xp);
      const PrimalDualPair p = make_pair_with_shadow(F, x, s, xp);
      return xi_check_local(p).xi_check_local;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  SupSearchResult out;
  Ascent counter;
  counter.budget = budget;
  const auto starts = parallel_map(n_starts, [&](int k) {
    PairSampler sampler(F.cone_ptr(), seed * 1000003u + static_cast<std::uint64_t>(k));
    Vector u(2 * n);
    u.head(n) = sampler.interior_point(0.9);
    u.tail(n) = sampler.interior_point(0.9);
    return u;
  });
  for (auto u : starts) {
    Ascent local;
    local.budget = budget / std::max(1, n_starts);
    const double val = fd_ascend(eval, u, 0.1 * (1.0 + u.norm()), local);
    counter.evaluations += local.evaluations;
    if (val > out.best_xi) {
      out.best_xi = val;
      out.x = u.head(n);
      out.s = -K.gradient(u.tail(n));
    }
  }
  out.evaluations = counter.evaluations;
  return out;
}

SupSearchResult xi_slice_sup_search(const Barrier& F, const Vector& s, double mu, int n_starts,
                                    std::uint64_t seed, int budget) {
  if (budget <= 0) throw DomainError("xi_slice_sup_search: budget must be positive");
  const Cone& K = F.cone();
  const Vector x_shadow = shadow_primal(F, s);
  const Vector center = mu * x_shadow;
  const Eigen::MatrixXd N = null_basis(s);

  const auto eval = [&](const Vector& z) -> double {
    const Vector x = center + N * z;
    if (K.contains(x, 1e-9).verdict != Verdict::interior) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    try {
      const PrimalDualPair p = make_pair_with_shadow(F, x, s, x_shadow);
      return xi_check_local(p).xi_check_local;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  SupSearchResult out;
  Ascent counter;
  counter.budget = budget;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < n_starts; ++k) {
    Vector dir(N.cols());
    for (int i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
    dir.normalize();
    const double sigma = gauge_sigma(K, center, -(N * dir));
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    Vector z = (uni(rng) / std::max(sigma, 1e-12)) * dir;
    Ascent local;
    local.budget = budget / std::max(1, n_starts);
    const double val = fd_ascend(eval, z, 0.05 / std::max(sigma, 1e-12), local);
    counter.evaluations += local.evaluations;
    if (val > out.best_xi) {
      out.best_xi = val;
      out.x = center + N * z;
      out.s = s;
    }
  }
  out.evaluations = counter.evaluations;
  return out;
}

}  // namespace conik
