#include "conik/proximity.hpp"

#include <cmath>

namespace conik {

double gamma_g(const PrimalDualPair& pair) {
  const double theta = pair.theta();
  const double g = theta * (pair.mu * pair.mu_tilde - 1.0);
  if (g >= 0.0) return g;
  if (g > -1e-12 * rel_scale(theta)) return 0.0;
  throw InternalConsistencyError("gamma_g: negative value contradicts mu*mu_tilde >= 1");
}

double gamma_inf(const PrimalDualPair& pair) {
  const Vector target = pair.mu * pair.x_shadow;
  const double direct = gauge_sigma(pair.cone(), pair.x, target) - 1.0;
  const double shifted = gauge_sigma(pair.cone(), pair.x, target - pair.x);
  if (std::abs(direct - shifted) > 1e-9 * rel_scale(std::abs(direct))) {
    throw InternalConsistencyError("gamma_inf: the two gauge routes disagree");
  }
  return std::max(direct, 0.0);
}

double delta_f(const PrimalDualPair& pair) {
  const double theta = pair.theta();
  const double primary = (gamma_g(pair) + 1.0) / pair.mu;
  const double cross = theta * pair.mu_tilde - theta * (theta - 1.0) / (pair.s.dot(pair.x));
  if (std::abs(primary - cross) > 1e-10 * rel_scale(std::abs(primary))) {
    throw InternalConsistencyError("delta_f: expressions disagree beyond tolerance");
  }
  return primary;
}

ProximityReport proximity_report(const PrimalDualPair& pair) {
  return ProximityReport{gamma_g(pair), gamma_inf(pair), delta_f(pair), pair.mu, pair.mu_tilde};
}

TauRho tau_rho(double n) {
  if (!(n >= 2.0)) throw DomainError("tau_rho: need n >= 2");
  const double tau = std::sqrt(n / (n - 1.0));
  return TauRho{tau, (tau + 1.0) * (tau + 1.0) / (tau * (tau + 2.0))};
}

}  // namespace conik
