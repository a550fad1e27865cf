#include "conik/ipm.hpp"

#include "conik/duality.hpp"
#include "conik/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace conik {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

ConicProgram gen_feasible_instance(ConePtr cone, int m, std::uint64_t seed) {
  const int n = cone->dim();
  if (m < 1 || m >= n) throw DomainError("gen_feasible_instance: need 1 <= m < n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  ConicProgram prog;
  prog.cone = cone;
  for (int attempt = 0; attempt < 16; ++attempt) {
    prog.A = Eigen::MatrixXd(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) prog.A(i, j) = normal(rng);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(prog.A);
    if (lu.rank() == m) break;
    if (attempt == 15) throw InternalConsistencyError("gen_feasible_instance: rank-deficient A");
  }

  PairSampler sampler(cone, seed ^ 0x9e3779b97f4a7c15ull);
  prog.x0 = sampler.interior_point(0.6, 2);
  prog.s0 = sampler.dual_interior_point(0.6, 0.25);
  prog.y0 = Vector(m);
  for (int i = 0; i < m; ++i) prog.y0(i) = normal(rng);
  prog.b = prog.A * prog.x0;
  prog.c = prog.A.transpose() * prog.y0 + prog.s0;
  return prog;
}

namespace {

struct Directions {
  Vector dx, dy, ds;
};

// Eliminate ds, solve the reduced normal system A T^{-1} A^T dy = -A T^{-1} r.
Directions kkt_solve(const Eigen::MatrixXd& A, const CholFactor& T_chol, const Vector& r) {
  const Eigen::MatrixXd Z = chol_solve(T_chol, Eigen::MatrixXd(A.transpose()));
  const Vector w = chol_solve(T_chol, r);
  Eigen::MatrixXd M = A * Z;
  M = 0.5 * (M + M.transpose()).eval();
  CholFactor Mc = chol_factor(M);
  if (!Mc.ok) throw InternalConsistencyError("ipm: normal system is not positive definite");
  Directions d;
  d.dy = chol_solve(Mc, Vector(-(A * w)));
  d.dx = Z * d.dy + w;
  d.ds = -A.transpose() * d.dy;
  return d;
}

struct PairState {
  PrimalDualPair pair;
  double gamma;
};

// Pair assembly for solver iterates: the solver guards strict feasibility
// itself, and late iterates are too close to the boundary for the
// verification-grade consistency windows in make_pair.
PairState eval_state(const Barrier& F, const Vector& x, const Vector& s,
                     const Vector* warm = nullptr) {
  const Cone& K = F.cone();
  Vector xt;
  if (auto cf = K.shadow_primal_closed_form(s)) {
    xt = *cf;
  } else {
    NewtonReport rep = shadow_primal_newton(F, s, 1e-11, 200, warm);
    // Neighborhood control needs gamma_G to ~1e-3 only; accept the
    // conditioning floor of the Newton solve well below that.
    if (!rep.converged && rep.residual > 1e-5) {
      throw ShadowSolveError("ipm: dual shadow solve stalled", rep.residual, rep.iterations);
    }
    xt = rep.z;
  }
  PrimalDualPair p{F, x, s, xt, -K.gradient(x), 0.0, 0.0};
  p.mu = s.dot(x) / F.theta();
  p.mu_tilde = p.x_shadow.dot(p.s_shadow) / F.theta();
  const double g = F.theta() * (p.mu * p.mu_tilde - 1.0);
  return PairState{std::move(p), std::max(g, 0.0)};
}

// Trial points in a line search may sit too close to the boundary for the
// shadow solve; such trials are rejected rather than fatal.
std::optional<PairState> try_eval_state(const Barrier& F, const Vector& x, const Vector& s,
                                        const Vector* warm = nullptr) {
  try {
    return eval_state(F, x, s, warm);
  } catch (const ShadowSolveError&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double max_step(const Cone& K, const Vector& x, const Vector& s, const Vector& dx,
                const Vector& ds, double frac) {
  const double sp = gauge_sigma(K, x, -dx);
  const double sd = dual_gauge_sigma(K, s, -ds);
  double alpha = std::numeric_limits<double>::infinity();
  if (sp > 0.0) alpha = std::min(alpha, frac / sp);
  if (sd > 0.0) alpha = std::min(alpha, frac / sd);
  return std::min(alpha, 1e3);
}

bool strictly_feasible(const Cone& K, const Vector& x, const Vector& s) {
  return K.contains(x, 1e-12).verdict == Verdict::interior &&
         K.dual_contains(s, 1e-12).verdict == Verdict::interior;
}

}  // namespace

IpmResult solve(const ConicProgram& prog, ScalingKind scaling, double eps,
                const IpmOptions& opts) {
  // The solver guards strict feasibility itself (margins > 1e-12 scaled);
  // the barrier gate is set below that so late iterates stay evaluable.
  const Barrier F(prog.cone, 1e-13);
  const Cone& K = *prog.cone;
  const int m = static_cast<int>(prog.A.rows());

  if (scaling == ScalingKind::nt && !K.symmetric_kind()) {
    throw UnsupportedScalingError("solve: the NT scaling needs a symmetric cone kind (" +
                                  K.spec_string() + "); use --scaling integral");
  }

  IpmResult res;
  res.gap0 = prog.s0.dot(prog.x0);
  Vector x = prog.x0, y = prog.y0, s = prog.s0;
  {
    const double pres = (prog.A * x - prog.b).norm();
    const double dres = (prog.A.transpose() * y + s - prog.c).norm();
    if (pres > 1e-9 * (1.0 + prog.b.norm()) || dres > 1e-9 * (1.0 + prog.c.norm()) ||
        !strictly_feasible(K, x, s)) {
      throw DomainError("solve: starting point is not strictly feasible");
    }
  }

  PairState cur = eval_state(F, x, s);
  int kkt = 0;
  int cycle = 0;

  const auto make_scaling = [&](const PrimalDualPair& p) {
    if (scaling == ScalingKind::integral) return integral_scaling(p, opts.quad_order);
    // Build T = F''(w) directly: the public nt_scaling op enforces its
    // verification-grade residuals, which late iterates cannot meet; the
    // solver's quality guard is the membership certificate below.
    auto w = K.nt_scaling_point(p.x, p.s);
    if (!w) throw UnsupportedScalingError("solve: no NT scaling point on " + K.spec_string());
    ScalingCandidate cand;
    cand.T = K.hessian(*w);
    cand.provenance = ScalingProvenance::nesterov_todd;
    cand.scaling_point = *w;
    return cand;
  };

  // One corrector step toward mu x~; accepts any gamma decrease, so it also
  // serves as the initial centering phase when the start is far out.
  const auto corrector_step = [&]() -> bool {
    ScalingCandidate cc = make_scaling(cur.pair);
    CholFactor Tcc = chol_factor(cc.T);
    if (!Tcc.ok) return false;
    const Vector r = cur.pair.mu * cur.pair.s_shadow - s;
    Directions corr = kkt_solve(prog.A, Tcc, r);
    ++kkt;
    double beta = std::min(1.0, max_step(K, x, s, corr.dx, corr.ds, opts.step_frac));
    while (beta > opts.stall_step) {
      const Vector xt = x + beta * corr.dx;
      const Vector st = s + beta * corr.ds;
      if (strictly_feasible(K, xt, st)) {
        std::optional<PairState> trial_opt = try_eval_state(F, xt, st, &cur.pair.x_shadow);
        if (!trial_opt) {
          beta *= opts.backtrack;
          continue;
        }
        PairState& trial = *trial_opt;
        if (trial.gamma < cur.gamma) {
          x = xt;
          y += beta * corr.dy;
          s = st;
          cur = std::move(trial);
          return true;
        }
      }
      beta *= opts.backtrack;
    }
    return false;
  };

  // Initial centering: generated starts may sit outside the neighborhood.
  while (cur.gamma > opts.eta && kkt < opts.max_kkt_solves) {
    if (!corrector_step()) {
      res.status = SolveStatus::stalled;
      res.message = "initial centering stalled";
      res.x = x;
      res.y = y;
      res.s = s;
      res.gap = s.dot(x);
      res.kkt_solves = kkt;
      return res;
    }
  }

  while (true) {
    res.max_primal_residual = std::max(res.max_primal_residual, (prog.A * x - prog.b).norm());
    if (s.dot(x) <= eps * res.gap0) {
      res.status = SolveStatus::optimal;
      break;
    }
    if (kkt >= opts.max_kkt_solves) {
      res.status = SolveStatus::iteration_limit;
      res.message = "KKT solve cap reached";
      break;
    }

    IterationRecord rec;
    rec.k = cycle;
    rec.scaling = scaling == ScalingKind::nt ? "nesterov_todd" : "integral";
    rec.membership_margin = std::numeric_limits<double>::quiet_NaN();

    // Predictor.
    ScalingCandidate cand = make_scaling(cur.pair);
    if (opts.check_membership && K.negative_curvature()) {
      const ScalingCertificate cert =
          check_membership(cand, cur.pair, 4.0 / 3.0, opts.membership_tol);
      rec.membership_margin = std::min(std::min(cert.lmi_lower_rel, cert.lmi_upper_rel),
                                       std::min(opts.membership_tol - cert.eq_primal_rel,
                                                opts.membership_tol - cert.eq_shadow_rel));
      if (!cert.pass) {
        throw InternalConsistencyError(
            "ipm: scaling left T(x,s;4/3) on a negative-curvature cone");
      }
    }

    CholFactor Tc = chol_factor(cand.T);
    if (!Tc.ok) {
      res.status = SolveStatus::stalled;
      res.message = "scaling factorization failed at the conditioning floor";
      break;
    }
    Directions pred = kkt_solve(prog.A, Tc, Vector(-s));
    ++kkt;

    double alpha = max_step(K, x, s, pred.dx, pred.ds, opts.step_frac);
    const double mu_before = cur.pair.mu;
    bool accepted = false;
    PairState next = cur;
    while (alpha > opts.stall_step) {
      const Vector xt = x + alpha * pred.dx;
      const Vector st = s + alpha * pred.ds;
      if (strictly_feasible(K, xt, st)) {
        std::optional<PairState> trial = try_eval_state(F, xt, st, &cur.pair.x_shadow);
        if (trial && trial->gamma <= opts.eta && trial->pair.mu < mu_before) {
          next = std::move(*trial);
          accepted = true;
          break;
        }
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      res.status = SolveStatus::stalled;
      res.message = "predictor line search stalled";
      break;
    }
    x += alpha * pred.dx;
    y += alpha * pred.dy;
    s += alpha * pred.ds;
    cur = std::move(next);
    rec.step_predictor = alpha;

    // Correctors drive gamma_G back under eta_inner, aiming at mu x~.
    int correctors = 0;
    while (cur.gamma > opts.eta_inner && correctors < opts.max_correctors &&
           kkt < opts.max_kkt_solves) {
      ++correctors;
      if (!corrector_step()) break;
    }
    rec.correctors = correctors;

    rec.mu = cur.pair.mu;
    rec.gamma_g = cur.gamma;
    // Diagnostics may become unevaluable at rounding-floor conditioning.
    try {
      rec.gamma_inf =
          std::max(gauge_sigma(K, x, cur.pair.mu * cur.pair.x_shadow) - 1.0, 0.0);
      rec.xi_check = xi_check_local(cur.pair).xi_check_local;
    } catch (const DomainError&) {
      rec.gamma_inf = std::numeric_limits<double>::quiet_NaN();
      rec.xi_check = std::numeric_limits<double>::quiet_NaN();
    }
    res.trace.push_back(rec);
    ++cycle;
  }

  res.x = x;
  res.y = y;
  res.s = s;
  res.gap = s.dot(x);
  res.kkt_solves = kkt;
  return res;
}

IterationStudy iteration_study(const std::vector<ConePtr>& family, double eps, std::uint64_t seed,
                               int seeds_per, ScalingKind scaling) {
  IterationStudy study;
  std::vector<double> log_theta, log_iters;
  for (const auto& cone : family) {
    const int n = cone->dim();
    const int m = std::max(1, n / 2);
    std::vector<double> counts;
    for (int k = 0; k < seeds_per; ++k) {
      ConicProgram prog = gen_feasible_instance(cone, m, seed + 977u * k);
      IpmResult r = solve(prog, scaling, eps);
      if (r.status != SolveStatus::optimal) {
        throw InternalConsistencyError("iteration_study: solve failed on " + cone->spec_string());
      }
      counts.push_back(static_cast<double>(r.kkt_solves));
    }
    std::sort(counts.begin(), counts.end());
    const double median = counts[counts.size() / 2];
    IterationStudyRow row;
    row.cone = cone->spec_string();
    row.theta = cone->theta();
    row.n = n;
    row.m = m;
    row.median_iterations = median;
    row.bound = 20.0 * std::sqrt(cone->theta()) * std::log(1.0 / eps);
    study.rows.push_back(row);
    log_theta.push_back(std::log(cone->theta()));
    log_iters.push_back(std::log(median));
  }
  // Least-squares slope of log(iterations) on log(theta).
  const size_t n = log_theta.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += log_theta[i];
    my += log_iters[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (log_theta[i] - mx) * (log_theta[i] - mx);
    sxy += (log_theta[i] - mx) * (log_iters[i] - my);
  }
  study.fitted_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  return study;
}

}  // namespace conik
