#include "conik/scaling.hpp"

#include <cmath>
#include <limits>

namespace conik {

const char* provenance_name(ScalingProvenance p) {
  switch (p) {
    case ScalingProvenance::nesterov_todd: return "nesterov_todd";
    case ScalingProvenance::integral: return "integral";
    case ScalingProvenance::custom: return "custom";
  }
  return "?";
}

namespace {

// (gamma_G + 1)/mu without the proximity module's strict clamp window;
// membership and the eigenvalue ratio treat conditioning as data.
double delta_f_robust(const PrimalDualPair& pair) {
  const double g = pair.theta() * (pair.mu * pair.mu_tilde - 1.0);
  return (std::max(g, 0.0) + 1.0) / pair.mu;
}

}  // namespace

ScalingCandidate nt_scaling(const PrimalDualPair& pair) {
  const Cone& K = pair.cone();
  auto w = K.nt_scaling_point(pair.x, pair.s);
  if (!w) {
    throw UnsupportedScalingError(
        std::string("nt_scaling: no scaling point on cone kind '") + kind_name(K.kind()) +
        "'; use the integral scaling");
  }
  ScalingCandidate cand;
  cand.T = K.hessian(*w);
  cand.provenance = ScalingProvenance::nesterov_todd;
  cand.scaling_point = *w;
  const double r1 = (cand.T * pair.x - pair.s).norm() / rel_scale(pair.s.norm());
  const double r2 = (cand.T * pair.x_shadow - pair.s_shadow).norm() / rel_scale(pair.s_shadow.norm());
  if (r1 > 1e-9 || r2 > 1e-9) {
    throw InternalConsistencyError("nt_scaling: residual of F''(w)x = s exceeds 1e-9");
  }
  return cand;
}

QuadRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  // Golub-Welsch on the Jacobi matrix, then map [-1,1] -> [0,1].
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = 0.5 * (es.eigenvalues()(k) + 1.0);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = v0 * v0;  // 2 v0^2, halved by the interval map
  }
  return rule;
}

SymMatrix averaged_hessian(const Barrier& F, const Vector& x, const Vector& y, int quad_order) {
  const QuadRule rule = gauss_legendre(quad_order);
  SymMatrix G = SymMatrix::Zero(F.dim(), F.dim());
  for (int k = 0; k < quad_order; ++k) {
    const Vector z = (1.0 - rule.nodes[k]) * x + rule.nodes[k] * y;
    G += rule.weights[k] * F.cone().hessian(z);
  }
  return G;
}

ScalingCandidate integral_scaling(const PrimalDualPair& pair, int quad_order) {
  if (quad_order < 8) throw DomainError("integral_scaling: quad_order must be >= 8");
  ScalingCandidate cand;
  cand.T = pair.mu *
           averaged_hessian(pair.barrier, pair.x, pair.mu * pair.x_shadow, quad_order);
  cand.provenance = ScalingProvenance::integral;
  cand.quad_order = quad_order;
  return cand;
}

ScalingCertificate check_membership(const ScalingCandidate& cand, const PrimalDualPair& pair,
                                    double xi, double tol) {
  ScalingCertificate cert;
  cert.xi = xi;
  cert.tol = tol;
  cert.eq_primal_rel = (cand.T * pair.x - pair.s).norm() / rel_scale(pair.s.norm());
  cert.eq_shadow_rel =
      (cand.T * pair.x_shadow - pair.s_shadow).norm() / rel_scale(pair.s_shadow.norm());

  const double delta = delta_f_robust(pair);
  const SymMatrix Hx = pair.cone().hessian(pair.x);
  const SymMatrix Hxt = pair.cone().hessian(pair.x_shadow);  // = F''_*(s)^{-1}
  const SymMatrix lower = Hx / (xi * delta);
  const SymMatrix upper = (xi * delta) * Hxt;
  cert.lmi_lower_rel =
      min_eig_diff(lower, cand.T) / rel_scale(lower.cwiseAbs().maxCoeff());
  cert.lmi_upper_rel =
      min_eig_diff(cand.T, upper) / rel_scale(upper.cwiseAbs().maxCoeff());
  cert.pass = cert.eq_primal_rel <= tol && cert.eq_shadow_rel <= tol &&
              cert.lmi_lower_rel >= -tol && cert.lmi_upper_rel >= -tol;
  return cert;
}

ComplexityReport xi_check_local(const PrimalDualPair& pair) {
  ComplexityReport rep;
  const SymMatrix Hx = pair.cone().hessian(pair.x);
  const SymMatrix Hxt = pair.cone().hessian(pair.x_shadow);
  // lambda_max of (F''(x), F''_*(s)^{-1}) equals lambda_max(F''_*(s) F''(x)).
  GenEigResult ge = geneig_max(Hx, Hxt);
  const double delta = delta_f_robust(pair);
  rep.xi_check_local = std::sqrt(std::max(ge.lambda_max, 0.0)) / delta;
  rep.eigvec = ge.vec;
  rep.xi_lower = rep.xi_check_local;
  rep.xi_upper = std::numeric_limits<double>::infinity();
  return rep;
}

ComplexityReport xi_local_bounds(const PrimalDualPair& pair,
                                 std::vector<ScalingCandidate> candidates) {
  ComplexityReport rep = xi_check_local(pair);
  if (candidates.empty()) {
    if (pair.cone().symmetric_kind()) candidates.push_back(nt_scaling(pair));
    candidates.push_back(integral_scaling(pair));
  }

  const double eq_tol = 1e-7;
  const double lmi_tol = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    ScalingCertificate at_lower = check_membership(cand, pair, rep.xi_lower, eq_tol);
    rep.certificates.push_back(at_lower);
    if (at_lower.eq_primal_rel > eq_tol || at_lower.eq_shadow_rel > eq_tol) continue;

    const auto lmis_pass = [&](double xi) {
      ScalingCertificate c = check_membership(cand, pair, xi, eq_tol);
      return c.lmi_lower_rel >= -lmi_tol && c.lmi_upper_rel >= -lmi_tol;
    };
    double lo = rep.xi_lower, hi = 10.0 * pair.theta();
    if (lmis_pass(lo)) {
      hi = lo;
    } else if (!lmis_pass(hi)) {
      continue;  // candidate never enters the set on the bracket
    } else {
      while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        (lmis_pass(mid) ? hi : lo) = mid;
      }
    }
    if (hi < best) {
      best = hi;
      rep.winning_candidate = provenance_name(cand.provenance);
    }
  }
  rep.xi_upper = best;
  return rep;
}

}  // namespace conik
