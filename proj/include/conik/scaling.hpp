#pragma once

#include "conik/proximity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conik {

enum class ScalingProvenance { nesterov_todd, integral, custom };

const char* provenance_name(ScalingProvenance p);

struct ScalingCandidate {
  SymMatrix T;
  ScalingProvenance provenance = ScalingProvenance::custom;
  std::optional<Vector> scaling_point;  // w with F''(w) = T (Nesterov-Todd)
  int quad_order = 0;                   // integral scalings
};

// Requested on a cone kind with no scaling point (no F''(w) can satisfy
// both equality constraints on nonsymmetric cones).
class UnsupportedScalingError : public DomainError {
 public:
  using DomainError::DomainError;
};

// T = F''(w) at the unique w with F''(w) x = s; symmetric kinds only.
ScalingCandidate nt_scaling(const PrimalDualPair& pair);

struct QuadRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // summing to 1
};
QuadRule gauss_legendre(int order);

// G = integral of F''((1-alpha) x + alpha y) d alpha over [0, 1].
SymMatrix averaged_hessian(const Barrier& F, const Vector& x, const Vector& y, int quad_order);

// T = mu * integral of F''((1-alpha) x + alpha mu x~) d alpha.
ScalingCandidate integral_scaling(const PrimalDualPair& pair, int quad_order = 32);

struct ScalingCertificate {
  double xi = 0.0;
  double tol = 0.0;
  double eq_primal_rel = 0.0;    // ||T x - s|| / max(1, ||s||)
  double eq_shadow_rel = 0.0;    // ||T x~ - s~|| / max(1, ||s~||)
  double lmi_lower_rel = 0.0;    // min eig of T - F''(x)/(xi delta), normalized
  double lmi_upper_rel = 0.0;    // min eig of xi delta F''_*(s)^{-1} - T, normalized
  bool pass = false;
};

// The four membership checks for the scaling set at level xi.
ScalingCertificate check_membership(const ScalingCandidate& cand, const PrimalDualPair& pair,
                                    double xi, double tol);

struct ComplexityReport {
  double xi_check_local = 0.0;  // lambda_max^{1/2}(F''(x) F''_*(s)) / delta_F
  Vector eigvec;                // maximizing generalized eigenvector
  double xi_lower = 0.0;
  double xi_upper = 0.0;  // +inf when no candidate satisfies the equalities
  std::string winning_candidate;
  std::vector<ScalingCertificate> certificates;
};

ComplexityReport xi_check_local(const PrimalDualPair& pair);

// Bisection on xi per candidate; defaults to NT (where supported) and the
// integral scaling when the candidate list is empty.
ComplexityReport xi_local_bounds(const PrimalDualPair& pair,
                                 std::vector<ScalingCandidate> candidates = {});

}  // namespace conik
