#include "conik/sampling.hpp"

#include <cmath>
#include <optional>

namespace conik {

Vector PairSampler::random_direction(int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = normal(rng_);
  const double nrm = d.norm();
  return nrm > 0.0 ? Vector(d / nrm) : Vector(Vector::Unit(n, 0));
}

Vector PairSampler::interior_point(double max_radius, int steps, double log_scale_sd) {
  const Cone& K = barrier_.cone();
  Vector x = K.canonical_point();
  std::uniform_real_distribution<double> uni(0.0, max_radius);
  for (int k = 0; k < steps; ++k) {
    const Vector d = random_direction(K.dim());
    // Step to the boundary in direction +d is 1/sigma_x(-d); recession
    // directions get a scale-based cap instead.
    const double sigma = gauge_sigma(K, x, -d);
    const double denom = std::max(sigma, 1.0 / (1.0 + x.norm()));
    x += (uni(rng_) / denom) * d;
  }
  if (log_scale_sd > 0.0) {
    std::normal_distribution<double> normal(0.0, log_scale_sd);
    x *= std::exp(normal(rng_));
  }
  return x;
}

Vector PairSampler::dual_interior_point(double max_radius, double log_scale_sd) {
  const Vector xp = interior_point(max_radius);
  std::normal_distribution<double> normal(0.0, log_scale_sd);
  return std::exp(normal(rng_)) * shadow_dual(barrier_, xp);
}

PrimalDualPair PairSampler::pair(double max_radius, double log_scale_sd) {
  const Vector x = interior_point(max_radius, 2, 0.5 * log_scale_sd);
  const Vector xp = interior_point(max_radius);
  std::normal_distribution<double> normal(0.0, log_scale_sd);
  const double t = std::exp(normal(rng_));
  const Vector s = t * shadow_dual(barrier_, xp);
  return make_pair_with_shadow(barrier_, x, s, xp / t);
}

PrimalDualPair PairSampler::near_central_pair(double gamma_target) {
  const Cone& K = barrier_.cone();
  const Vector x = interior_point(0.8);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  const double target = gamma_target * uni(rng_);
  const Vector d = random_direction(K.dim());

  const auto build = [&](double del) -> std::optional<PrimalDualPair> {
    const Vector xp = x + del * (x.norm() / d.norm()) * d;
    if (K.contains(xp, 1e-12).verdict != Verdict::interior) return std::nullopt;
    const Vector s = shadow_dual(barrier_, xp);
    return make_pair_with_shadow(barrier_, x, s, xp);
  };

  double delta = 0.01;
  for (int it = 0; it < 60; ++it) {
    std::optional<PrimalDualPair> p = build(delta);
    if (p) {
      const double g = K.theta() * (p->mu * p->mu_tilde - 1.0);
      if (g <= target && g >= 0.0) return *p;
      if (g > 0.0) {
        delta *= 0.8 * std::sqrt(target / g);
        continue;
      }
    }
    delta *= 0.5;
  }
  // Fall back to the exact center.
  const Vector s = shadow_dual(barrier_, x);
  return make_pair_with_shadow(barrier_, x, s, x);
}

PrimalDualPair PairSampler::half_dikin_pair(double radius_max) {
  // mu x~ lands inside the Dikin ellipsoid of radius radius_max at x.
  const Cone& K = barrier_.cone();
  const Vector x = interior_point(0.8);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  for (int attempt = 0; attempt < 80; ++attempt) {
    Vector d = random_direction(K.dim());
    const double norm_x = barrier_.local_norm(x, d);
    d *= uni(rng_) * radius_max / norm_x;
    const Vector target = x + d;
    if (K.contains(target, 1e-12).verdict != Verdict::interior) continue;
    // rescale so that <-F'(target), x> = theta, making mu = 1 and mu x~ = target
    const double lam = -barrier_.gradient(target).dot(x) / barrier_.theta();
    const Vector center = lam * target;
    if (K.contains(center, 1e-12).verdict != Verdict::interior) continue;
    const Vector s = shadow_dual(barrier_, center);
    PrimalDualPair p = make_pair_with_shadow(barrier_, x, s, center);
    const Vector dv = p.mu * p.x_shadow - x;
    if (barrier_.local_norm(x, dv) <= radius_max) return p;
  }
  const Vector s = shadow_dual(barrier_, x);
  return make_pair_with_shadow(barrier_, x, s, x);
}

std::optional<PrimalDualPair> PairSampler::far_pair(double min_mu_mu_tilde, int max_tries) {
  for (int k = 0; k < max_tries; ++k) {
    PrimalDualPair p = pair(0.9999, 1.5);
    if (p.mu * p.mu_tilde >= min_mu_mu_tilde) return p;
  }
  return std::nullopt;
}

}  // namespace conik
