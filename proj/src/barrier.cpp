#include "conik/barrier.hpp"

#include <algorithm>
#include <cmath>

namespace conik {

void Barrier::require_interior(const Vector& x) const {
  cone_->require_dim(x, "barrier");
  const Membership m = cone_->contains(x, interior_tol_);
  if (m.verdict != Verdict::interior) {
    throw DomainError(std::string("point is not interior to ") + cone_->spec_string() +
                      " (margin " + std::to_string(m.margin) + ")");
  }
}

BarrierEval Barrier::eval(const Vector& x) const {
  require_interior(x);
  return BarrierEval{cone_->value(x), cone_->gradient(x), cone_->hessian(x)};
}

double Barrier::value(const Vector& x) const {
  require_interior(x);
  return cone_->value(x);
}

Vector Barrier::gradient(const Vector& x) const {
  require_interior(x);
  return cone_->gradient(x);
}

SymMatrix Barrier::hessian(const Vector& x) const {
  require_interior(x);
  return cone_->hessian(x);
}

double Barrier::local_norm(const Vector& x, const Vector& h) const {
  const SymMatrix H = hessian(x);
  return std::sqrt(std::max(0.0, h.dot(H * h)));
}

double fd_default_step(const Barrier& F, const Vector& x, const Vector& u) {
  // Keep x +- step*u well inside the cone: a step of 1/sigma in either
  // direction reaches the boundary.
  const double reach = std::max({gauge_sigma(F.cone(), x, u), gauge_sigma(F.cone(), x, -u),
                                 u.norm() / (1.0 + x.norm()), 1e-300});
  return 1e-4 / reach;
}

SymMatrix fd_third_derivative(const Barrier& F, const Vector& x, const Vector& u, double step) {
  const SymMatrix plus = F.hessian(x + step * u);
  const SymMatrix minus = F.hessian(x - step * u);
  return (plus - minus) / (2.0 * step);
}

LogHomReport check_loghom(const Barrier& F, const Vector& x, double tol) {
  const BarrierEval e = F.eval(x);
  LogHomReport r;
  r.grad_residual = std::abs(e.gradient.dot(x) + F.theta());
  r.hess_residual = (e.hessian * x + e.gradient).norm();
  r.pass = r.grad_residual <= tol * rel_scale(F.theta()) &&
           r.hess_residual <= tol * rel_scale(F.theta());
  return r;
}

CurvatureReport check_negative_curvature(const Barrier& F, const Vector& x, const Vector& u,
                                         double step) {
  if (F.cone().contains(u, 1e-12).verdict == Verdict::outside) {
    throw DomainError("check_negative_curvature: direction u is not in the cone");
  }
  F.require_interior(x);
  if (step <= 0.0) step = fd_default_step(F, x, u);
  const SymMatrix D3 = fd_third_derivative(F, x, u, step);
  const SymMatrix H = F.hessian(x);
  CurvatureReport r;
  r.step_used = step;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (D3 + D3.transpose()),
                                                    Eigen::EigenvaluesOnly);
  r.max_eigenvalue = es.eigenvalues()(static_cast<int>(D3.rows()) - 1);
  r.tol_used = 1e-5 * rel_scale(H.cwiseAbs().maxCoeff()) * rel_scale(u.norm());
  r.pass = r.max_eigenvalue <= r.tol_used;
  return r;
}

SelfConcordanceReport check_selfconcordance(const Barrier& F, const Vector& x, const Vector& h) {
  F.require_interior(x);
  const double step = fd_default_step(F, x, h);
  const SymMatrix D3 = fd_third_derivative(F, x, h, step);
  const SymMatrix H = F.hessian(x);
  const double hx = std::sqrt(std::max(0.0, h.dot(H * h)));
  const SymMatrix G = 0.5 * (D3 + D3.transpose()) - 2.0 * hx * H;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  SelfConcordanceReport r;
  r.margin = es.eigenvalues()(static_cast<int>(G.rows()) - 1);
  r.tol_used = 1e-5 * rel_scale(H.cwiseAbs().maxCoeff()) * rel_scale(hx);
  r.pass = r.margin <= r.tol_used;
  return r;
}

}  // namespace conik
