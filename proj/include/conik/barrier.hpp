#pragma once

#include "conik/cones.hpp"

namespace conik {

struct BarrierEval {
  double value;
  Vector gradient;
  SymMatrix hessian;
};

// The theta-LHSCB attached to a cone.  Thin, immutable, and shareable; a
// point counts as interior when its membership margin clears interior_tol.
class Barrier {
 public:
  explicit Barrier(ConePtr cone, double interior_tol = 1e-10)
      : cone_(std::move(cone)), interior_tol_(interior_tol) {}

  const Cone& cone() const { return *cone_; }
  const ConePtr& cone_ptr() const { return cone_; }
  double theta() const { return cone_->theta(); }
  int dim() const { return cone_->dim(); }
  double interior_tol() const { return interior_tol_; }

  void require_interior(const Vector& x) const;

  BarrierEval eval(const Vector& x) const;
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  SymMatrix hessian(const Vector& x) const;

  // ||h||_x = sqrt(<F''(x) h, h>)
  double local_norm(const Vector& x, const Vector& h) const;

 private:
  ConePtr cone_;
  double interior_tol_;
};

// Central difference of the Hessian: directional third derivative F'''(x; u).
SymMatrix fd_third_derivative(const Barrier& F, const Vector& x, const Vector& u, double step);

// Step size for third-derivative differencing, scaled by the gauge of u at x.
double fd_default_step(const Barrier& F, const Vector& x, const Vector& u);

struct LogHomReport {
  double grad_residual;  // |<F'(x), x> + theta|
  double hess_residual;  // ||F''(x) x + F'(x)||
  bool pass;
};
LogHomReport check_loghom(const Barrier& F, const Vector& x, double tol);

struct CurvatureReport {
  double max_eigenvalue;  // of the approximated F'''(x; u)
  double tol_used;
  double step_used;
  bool pass;  // max eigenvalue <= tol (concavity of <F'(.), u>)
};
// u must lie in K; pass means the sampled direction is consistent with
// negative curvature.  A verifier, not a decision procedure.
CurvatureReport check_negative_curvature(const Barrier& F, const Vector& x, const Vector& u,
                                         double step = 0.0);

struct SelfConcordanceReport {
  double margin;  // max eigenvalue of F'''(x;h) - 2 ||h||_x F''(x)
  double tol_used;
  bool pass;
};
SelfConcordanceReport check_selfconcordance(const Barrier& F, const Vector& x, const Vector& h);

}  // namespace conik
