#include "conik/duality.hpp"

#include <cmath>
#include <limits>

namespace conik {

Vector shadow_dual(const Barrier& F, const Vector& x) { return -F.gradient(x); }

NewtonReport shadow_primal_newton(const Barrier& F, const Vector& s, double tol,
                                  int max_iterations, const Vector* start) {
  const Cone& K = F.cone();
  if (K.dual_contains(s, F.interior_tol()).verdict != Verdict::interior) {
    throw DomainError("shadow_primal: s is not interior to the dual cone");
  }
  // Homogeneity makes <s, z0> = theta, which is the right scale.
  Vector z;
  if (start != nullptr && start->size() == K.dim() &&
      K.contains(*start, 1e-13).verdict == Verdict::interior) {
    z = (F.theta() / s.dot(*start)) * (*start);
  } else {
    const Vector x_ref = K.canonical_point();
    z = (F.theta() / s.dot(x_ref)) * x_ref;
  }

  NewtonReport rep;
  double objective = F.value(z) + s.dot(z);
  int polish = 0;
  int stagnant = 0;
  double best_lambda = std::numeric_limits<double>::infinity();
  double prev_lambda = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    const Vector grad = K.gradient(z) + s;
    const SymMatrix H = K.hessian(z);
    CholFactor C = chol_factor(H);
    if (!C.ok) break;  // conditioning floor reached; report the best iterate
    const Vector d = -chol_solve(C, grad);
    const double lambda = std::sqrt(std::max(0.0, -grad.dot(d)));
    rep.iterations = it;
    rep.residual = lambda;
    // conditioning floor: stop once the decrement stops shrinking
    if (lambda < 0.9 * best_lambda) {
      best_lambda = lambda;
      stagnant = 0;
    } else if (lambda < 1e-5 && ++stagnant >= 5) {
      break;
    }
    if (lambda <= tol) {
      rep.converged = true;
      // Quadratic convergence: a couple of extra full steps push the
      // residual to the rounding floor, which downstream identities
      // (mu*mu~ >= 1 within 1e-12) rely on.
      if (polish < 3 && lambda > 0.0 && lambda < prev_lambda &&
          K.contains(z + d, 1e-13).verdict == Verdict::interior) {
        ++polish;
        prev_lambda = lambda;
        z += d;
        continue;
      }
      break;
    }
    prev_lambda = lambda;
    // Cap the step at Dikin radius 0.9; interiority then follows.
    double alpha = 1.0;
    const double dikin = std::sqrt(std::max(0.0, d.dot(H * d)));
    if (dikin > 0.9) alpha = 0.9 / dikin;
    for (int bt = 0; bt < 60; ++bt) {
      Vector trial = z + alpha * d;
      if (K.contains(trial, 1e-13).verdict == Verdict::interior) {
        // radial correction: t = theta/<s, z> minimizes the objective
        // along the ray through the trial point
        const double t = F.theta() / s.dot(trial);
        if (t > 0.0) trial *= t;
        const double trial_obj = F.cone().value(trial) + s.dot(trial);
        if (trial_obj <= objective + 1e-12 * rel_scale(std::abs(objective))) {
          z = trial;
          objective = trial_obj;
          break;
        }
      }
      alpha *= 0.5;
    }
  }
  rep.z = z;
  return rep;
}

Vector shadow_primal(const Barrier& F, const Vector& s) {
  if (auto cf = F.cone().shadow_primal_closed_form(s)) {
    if (F.cone().dual_contains(s, F.interior_tol()).verdict != Verdict::interior) {
      throw DomainError("shadow_primal: s is not interior to the dual cone");
    }
    return *cf;
  }
  NewtonReport rep = shadow_primal_newton(F, s);
  if (!rep.converged) {
    throw ShadowSolveError("shadow_primal: Newton did not converge (residual " +
                               std::to_string(rep.residual) + ")",
                           rep.residual, rep.iterations);
  }
  return rep.z;
}

SymMatrix dual_hessian(const Barrier& F, const Vector& s) {
  const Vector xt = shadow_primal(F, s);
  const SymMatrix H = F.cone().hessian(xt);
  CholFactor C = chol_factor(H);
  if (!C.ok) throw InternalConsistencyError("dual_hessian: F''(x~) not positive definite");
  const SymMatrix eye = SymMatrix::Identity(H.rows(), H.cols());
  SymMatrix inv = chol_solve(C, eye);
  return 0.5 * (inv + inv.transpose());
}

PrimalDualPair make_pair(const Barrier& F, const Vector& x, const Vector& s) {
  F.require_interior(x);
  if (F.cone().dual_contains(s, F.interior_tol()).verdict != Verdict::interior) {
    throw DomainError("make_pair: s is not interior to the dual cone");
  }
  return make_pair_with_shadow(F, x, s, shadow_primal(F, s));
}

PrimalDualPair make_pair_with_shadow(const Barrier& F, const Vector& x, const Vector& s,
                                     const Vector& x_shadow) {
  PrimalDualPair p{F, x, s, x_shadow, shadow_dual(F, x), 0.0, 0.0};
  p.mu = s.dot(x) / F.theta();
  p.mu_tilde = p.x_shadow.dot(p.s_shadow) / F.theta();
  if (p.mu <= 0.0) throw DomainError("make_pair: <s, x> must be positive");
  if (p.mu * p.mu_tilde < 1.0 - 1e-12 * rel_scale(F.theta())) {
    throw InternalConsistencyError("make_pair: mu*mu_tilde < 1 beyond rounding slack");
  }
  return p;
}

bool is_central(const PrimalDualPair& pair, double tol) {
  return pair.mu * pair.mu_tilde - 1.0 <= tol;
}

}  // namespace conik
