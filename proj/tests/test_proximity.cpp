#include "conik/proximity.hpp"

#include "conik/sampling.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace conik;
using namespace conik::testing;

TEST_SUITE_BEGIN("proximity");

TEST_CASE("hand-evaluated orthant pair") {
  Barrier F(make_orthant(2));
  PrimalDualPair p = make_pair(F, (Vector(2) << 1.0, 2.0).finished(),
                               (Vector(2) << 3.0, 1.0).finished());
  CHECK(gamma_g(p) == doctest::Approx(1.0 / 12.0));
  CHECK(gamma_inf(p) == doctest::Approx(0.25));
  CHECK(delta_f(p) == doctest::Approx(13.0 / 30.0));

  ProximityReport rep = proximity_report(p);
  CHECK(rep.gamma_g == doctest::Approx(1.0 / 12.0));
  CHECK(rep.mu == doctest::Approx(2.5));
}

TEST_CASE("central pairs have zero proximity") {
  for (const auto& cone : cone_catalog()) {
    Barrier F(cone);
    PairSampler sampler(cone, 89);
    const Vector x = sampler.interior_point(0.7);
    PrimalDualPair p = make_pair(F, x, 2.3 * shadow_dual(F, x));
    CHECK(gamma_g(p) == doctest::Approx(0.0));
    CHECK(gamma_inf(p) == doctest::Approx(0.0).epsilon(1e-9));
    // delta_f at mu = 1: rescale s so that mu = 1
    PrimalDualPair unit = make_pair(F, x, shadow_dual(F, x));
    CHECK(unit.mu == doctest::Approx(1.0));
    CHECK(delta_f(unit) == doctest::Approx(1.0));
  }
}

TEST_CASE("delta_f scaling law") {
  Barrier F(make_orthant(3));
  PairSampler sampler(F.cone_ptr(), 97);
  PrimalDualPair p = sampler.pair(0.8);
  for (double t : {0.5, 3.0}) {
    PrimalDualPair q = make_pair(F, t * p.x, p.s);
    CHECK(t * delta_f(q) == doctest::Approx(delta_f(p)).epsilon(1e-10));
  }
}

TEST_CASE("tau and rho values") {
  TauRho t2 = tau_rho(2);
  CHECK(t2.tau == doctest::Approx(std::sqrt(2.0)));
  CHECK(t2.rho == doctest::Approx(1.2071068).epsilon(1e-7));
  CHECK(tau_rho(3).rho == doctest::Approx(1.2532).epsilon(1e-4));
  CHECK(std::abs(tau_rho(1e6).rho - 4.0 / 3.0) <= 1e-5);
  CHECK_THROWS_AS(tau_rho(1), DomainError);
}

TEST_CASE("rho increases monotonically toward 4/3") {
  double prev = tau_rho(2).rho;
  CHECK(prev < 4.0 / 3.0);
  for (int n = 3; n <= 100; ++n) {
    const double cur = tau_rho(n).rho;
    CHECK(cur > prev);
    CHECK(cur < 4.0 / 3.0);
    prev = cur;
  }
}

TEST_CASE("proximity inequalities on sampled pairs") {
  for (const auto& cone : cone_catalog()) {
    PairSampler sampler(cone, 101);
    const double theta = cone->theta();
    for (int rep = 0; rep < 20; ++rep) {
      PrimalDualPair p = sampler.pair(0.85);
      const double g = gamma_g(p);
      const double gi = gamma_inf(p);
      CHECK(g >= 0.0);
      CHECK(theta * gi >= g - 1e-8 * rel_scale(g));
      // the identity gamma_inf = sigma_x(mu x~ - x) is verified inside
      // gamma_inf; exercise the translate form too
      const Vector c = p.mu * p.x_shadow;
      const double fwd = gauge_sigma(*cone, p.x, c - p.x);
      const double bwd = gauge_sigma(*cone, c, c - p.x);
      CHECK(fwd == doctest::Approx(bwd / (1.0 - bwd)).epsilon(1e-9));
    }
  }
}

TEST_CASE("equality at zero holds exactly for central pairs") {
  Barrier F(make_soc({3}));
  PairSampler sampler(F.cone_ptr(), 103);
  const Vector x = sampler.interior_point(0.7);
  PrimalDualPair central = make_pair(F, x, 0.9 * shadow_dual(F, x));
  CHECK(gamma_g(central) <= 1e-12);
  CHECK(gamma_inf(central) <= 1e-9);

  PrimalDualPair off = sampler.pair(0.8);
  if (gamma_g(off) > 1e-6) CHECK(gamma_inf(off) > 0.0);
}

TEST_CASE("negative-curvature proximity bounds") {
  for (const auto& cone : negative_curvature_catalog()) {
    PairSampler sampler(cone, 107);
    for (int rep = 0; rep < 20; ++rep) {
      PrimalDualPair p = sampler.pair(0.85);
      const double g = gamma_g(p);
      const double gi = gamma_inf(p);
      CHECK(g >= gi * gi / (1.0 + gi) - 1e-8 * rel_scale(g));
      CHECK(g >= (3.0 * gi - 1.0) / 4.0 - 1e-8 * rel_scale(g));
    }
  }
}

TEST_SUITE_END();
