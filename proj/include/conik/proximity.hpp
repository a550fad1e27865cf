#pragma once

#include "conik/duality.hpp"

namespace conik {

struct ProximityReport {
  double gamma_g;
  double gamma_inf;
  double delta_f;
  double mu;
  double mu_tilde;
};

// Gradient proximity: theta*(mu*mu_tilde - 1), clamped at zero within
// rounding slack.
double gamma_g(const PrimalDualPair& pair);

// Uniform proximity: sigma_x(mu*x_tilde) - 1, cross-checked against
// sigma_x(mu*x_tilde - x).
double gamma_inf(const PrimalDualPair& pair);

// delta_F = (gamma_G + 1)/mu, cross-checked against
// theta*mu_tilde - theta*(theta - 1)/<s, x>.
double delta_f(const PrimalDualPair& pair);

ProximityReport proximity_report(const PrimalDualPair& pair);

struct TauRho {
  double tau;
  double rho;
};

// tau_n = sqrt(n/(n-1)), rho_n = (tau_n + 1)^2 / (tau_n (tau_n + 2)).
TauRho tau_rho(double n);

}  // namespace conik
