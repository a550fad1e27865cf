#pragma once

#include "conik/barrier.hpp"

namespace conik {

// Damped-Newton solve of F'(z) = -s does not converge within the cap.
class ShadowSolveError : public std::runtime_error {
 public:
  ShadowSolveError(const std::string& msg, double residual, int iterations)
      : std::runtime_error(msg), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

struct NewtonReport {
  Vector z;
  double residual = 0.0;  // Newton decrement of F(z) + <s, z> at z
  int iterations = 0;
  bool converged = false;
};

// s_tilde = -F'(x)
Vector shadow_dual(const Barrier& F, const Vector& x);

// Generic route for x_tilde = -F'_*(s): damped Newton on F(z) + <s, z>,
// with a radial rescale each iteration (the exact minimizer along the ray,
// by logarithmic homogeneity).  start, when given, replaces the canonical
// warm start.
NewtonReport shadow_primal_newton(const Barrier& F, const Vector& s, double tol = 1e-11,
                                  int max_iterations = 200, const Vector* start = nullptr);

// x_tilde = -F'_*(s); closed form where the cone provides one, Newton else.
Vector shadow_primal(const Barrier& F, const Vector& s);

// F''_*(s) = F''(x_tilde)^{-1}
SymMatrix dual_hessian(const Barrier& F, const Vector& s);

struct PrimalDualPair {
  Barrier barrier;
  Vector x, s;
  Vector x_shadow, s_shadow;  // x~ = -F'_*(s), s~ = -F'(x)
  double mu = 0.0;            // <s, x>/theta
  double mu_tilde = 0.0;      // <F'(x), F'_*(s)>/theta

  const Cone& cone() const { return barrier.cone(); }
  double theta() const { return barrier.theta(); }
};

PrimalDualPair make_pair(const Barrier& F, const Vector& x, const Vector& s);

// Assemble a pair whose shadow x~ = -F'_*(s) is already known (e.g. s came
// from the gradient bijection); skips the Newton solve.
PrimalDualPair make_pair_with_shadow(const Barrier& F, const Vector& x, const Vector& s,
                                     const Vector& x_shadow);

// Central pair test: mu*mu_tilde - 1 <= tol.
bool is_central(const PrimalDualPair& pair, double tol = 1e-9);

}  // namespace conik
