#include "conik/worstcase.hpp"

#include "conik/sampling.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace conik;
using namespace conik::testing;

TEST_SUITE_BEGIN("worstcase");

TEST_CASE("ratio R") {
  Barrier F(make_orthant(2));
  // central pairs make the two forms proportional with factor mu^2
  const Vector xc = (Vector(2) << 0.9, 2.1).finished();
  PrimalDualPair pc = make_pair(F, xc, 1.7 * shadow_dual(F, xc));
  const double mu2 = pc.mu * pc.mu;
  CHECK(ratio_R(pc, (Vector(2) << 1.0, 0.3).finished()) == doctest::Approx(mu2));
  CHECK(ratio_R(pc, (Vector(2) << -2.0, 5.0).finished()) == doctest::Approx(mu2));

  PrimalDualPair p = make_pair(F, (Vector(2) << 1.0, 2.0).finished(),
                               (Vector(2) << 3.0, 1.0).finished());
  CHECK(ratio_R(p, Vector::Unit(2, 1)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(ratio_R(p, Vector::Zero(2)), DomainError);

  // minimizing sqrt(R) delta over v gives 1/xi
  const double delta = delta_f(p);
  const SymMatrix Hx = p.barrier.hessian(p.x);
  const SymMatrix Hxt = p.cone().hessian(p.x_shadow);
  const double lam = geneig_max(Hx, Hxt).lambda_max;
  const double xi = xi_check_local(p).xi_check_local;
  CHECK(delta / std::sqrt(lam) == doctest::Approx(1.0 / xi).epsilon(1e-10));
}

TEST_CASE("v-space problem on the orthant") {
  VspaceResult r2 = vspace_xi_orthant(2);
  CHECK(r2.xi == doctest::Approx(1.2071068).epsilon(1e-7));
  CHECK(r2.alpha_opt == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(r2.v_opt(0) == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-8));
  CHECK(r2.v_opt(1) == doctest::Approx(1.0));

  for (int n : {2, 3, 5, 10, 50, 100}) {
    CHECK(vspace_xi_orthant(n).xi == doctest::Approx(tau_rho(n).rho).epsilon(1e-9));
  }
  CHECK_THROWS_AS(vspace_xi_orthant(1), DomainError);
}

TEST_CASE("worst-case points on the orthant") {
  const Vector s = (Vector(2) << 1.0, 1.0).finished();
  const Vector x = worstcase_orthant(2, s, 2, 1.0);
  CHECK(x(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(x(1) == doctest::Approx(std::sqrt(2.0) / (std::sqrt(2.0) + 1.0)).epsilon(1e-9));

  Barrier F(make_orthant(2));
  PrimalDualPair p = make_pair(F, x, s);
  CHECK(xi_check_local(p).xi_check_local == doctest::Approx(tau_rho(2).rho).epsilon(1e-9));
  const double tau = tau_rho(2).tau;
  CHECK(gamma_g(p) == doctest::Approx(1.0 / (tau + 1.0)).epsilon(1e-9));
  CHECK(gamma_inf(p) == doctest::Approx(1.0 / tau).epsilon(1e-9));
  // ||x - mu x~||_{mu x~} = tau/(tau+1)
  const Vector c = p.mu * p.x_shadow;
  const Vector d = x - c;
  const SymMatrix Hc = F.hessian(c);
  CHECK(std::sqrt(d.dot(Hc * d)) == doctest::Approx(tau / (tau + 1.0)).epsilon(1e-9));

  // every index attains the same measure
  Barrier F3(make_orthant(3));
  const Vector s3 = (Vector(3) << 2.0, 0.5, 1.5).finished();
  for (int i = 1; i <= 3; ++i) {
    const Vector xi3 = worstcase_orthant(3, s3, i, 0.7);
    PrimalDualPair pi = make_pair(F3, xi3, s3);
    CHECK(xi_check_local(pi).xi_check_local == doctest::Approx(tau_rho(3).rho).epsilon(1e-9));
  }
}

TEST_CASE("weighted-orthant reduction reproduces the non-optimal value") {
  CHECK(weighted_orthant_xi_sup(2.0) == doctest::Approx(1.0774).epsilon(1e-3));
  // exact stationary value: v* = (sqrt(3)+1)/2
  const double v = 0.5 * (std::sqrt(3.0) + 1.0);
  const double f = 2.0 / v + 2.0 - 6.0 / (v + 1.0);
  CHECK(weighted_orthant_xi_sup(2.0) == doctest::Approx(1.0 / f).epsilon(1e-10));
  // plain weights give the optimal orthant value
  CHECK(weighted_orthant_xi_sup(1.0) == doctest::Approx(tau_rho(2).rho).epsilon(1e-9));
}

TEST_CASE("extreme direction on the exponential cone") {
  Barrier F(make_exp(1));
  const Vector s = (Vector(3) << 1.0, 1.0, -1.0).finished();
  const double mu = 1.0 / 3.0;  // slice <s, x> = 1
  ExtremeVResult res = extreme_v_search(F, s, mu, 8, 31);
  REQUIRE(res.found);
  REQUIRE(res.maximizers.size() >= 1);
  const Vector v = res.maximizers.front();
  CHECK(std::abs(v(0)) <= 1e-6);
  CHECK(std::abs(v(1)) <= 1e-6);
  CHECK(v(2) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(res.best_norm_sq - 6.0) <= 1e-7);
  CHECK(res.target_norm_sq == doctest::Approx(6.0));
}

TEST_CASE("worst-case certificate on the exponential cone") {
  Barrier F(make_exp(1));
  const Vector s = (Vector(3) << 1.0, 1.0, -1.0).finished();
  const double mu = 1.0 / 3.0;
  const Vector v = (Vector(3) << 0.0, 0.0, -1.0).finished();
  WorstCaseCertificate cert = hatx_construct(F, s, v, mu);
  CHECK(cert.valid);
  CHECK(cert.v_norm_sq == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(cert.xi_at_xhat == doctest::Approx(tau_rho(3).rho).epsilon(1e-6));
  const double tau = tau_rho(3).tau;
  CHECK(cert.xhat_radius == doctest::Approx(tau / (tau + 1.0)).epsilon(1e-8));
  CHECK(F.cone().dual_contains(cert.r, 1e-7).verdict != Verdict::outside);
  CHECK(F.cone().dual_contains(cert.u, 1e-7).verdict != Verdict::outside);
  CHECK(F.cone().contains(cert.t, 1e-7).verdict != Verdict::outside);
}

TEST_CASE("Toeplitz 3x3 slice has the two sign-matrix extremes") {
  auto cone = make_toeplitz_tridiag(3);
  Barrier F(cone);
  // s is the identity matrix pushed through the adjoint: s_i = Tr(A_i)
  const Vector s = (Vector(3) << 3.0, 0.0, 0.0).finished();
  const double mu = 1.0 / 3.0;
  ExtremeVResult res = extreme_v_search(F, s, mu, 8, 37);
  REQUIRE(res.found);
  REQUIRE(res.maximizers.size() == 2);
  // both extremes are (1, +-1, 1)/3 in slice coordinates
  bool seen_plus = false, seen_minus = false;
  for (const auto& v : res.maximizers) {
    CHECK(v(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(std::abs(v(2) - 1.0 / 3.0) <= 1e-6);
    if (v(1) > 0) seen_plus = true;
    if (v(1) < 0) seen_minus = true;
    CHECK(std::abs(std::abs(v(1)) - 1.0 / 3.0) <= 1e-6);
  }
  CHECK(seen_plus);
  CHECK(seen_minus);

  for (const auto& v : res.maximizers) {
    WorstCaseCertificate cert = hatx_construct(F, s, v, mu);
    CHECK(cert.valid);
    CHECK(cert.xi_at_xhat == doctest::Approx(tau_rho(3).rho).epsilon(1e-6));
  }
}

TEST_CASE("banded Toeplitz 5x5 slice admits no attaining point") {
  auto cone = make_toeplitz_tridiag(5);
  Barrier F(cone);
  const Vector s = (Vector(3) << 5.0, 0.0, 0.0).finished();
  const double mu = 1.0 / 5.0;
  ExtremeVResult res = extreme_v_search(F, s, mu, 8, 41);
  CHECK_FALSE(res.found);
  CHECK(res.maximizers.empty());
  CHECK(res.best_norm_sq < res.target_norm_sq - 1e-3);

  // and the slice supremum of the local measure stays below rho_5
  SupSearchResult sup = xi_slice_sup_search(F, s, mu, 6, 43, 20000);
  CHECK(sup.best_xi < tau_rho(5).rho - 1e-4);
  CHECK(sup.best_xi <= 4.0 / 3.0 + 1e-7);
}

TEST_CASE("orthant extreme directions reproduce the closed-form worst case") {
  Barrier F(make_orthant(3));
  const Vector s = (Vector(3) << 1.0, 2.0, 0.5).finished();
  const double mu = 1.0;
  ExtremeVResult res = extreme_v_search(F, s, mu, 12, 47);
  REQUIRE(res.found);
  // extremes are mu theta e_i / s_i; each reproduces worstcase_orthant
  REQUIRE(res.maximizers.size() == 3);
  for (const auto& v : res.maximizers) {
    int idx = -1;
    for (int i = 0; i < 3; ++i) {
      if (v(i) > 1e-6) {
        CHECK(idx == -1);
        idx = i;
        CHECK(v(i) == doctest::Approx(3.0 * mu / s(i)).epsilon(1e-7));
      }
    }
    REQUIRE(idx >= 0);
    WorstCaseCertificate cert = hatx_construct(F, s, v, mu);
    CHECK(cert.valid);
    const Vector closed = worstcase_orthant(3, s, idx + 1, mu);
    CHECK((cert.x_hat - closed).norm() <= 1e-7 * closed.norm());
  }
}

TEST_CASE("supremum search reaches the known worst cases") {
  Barrier F(make_orthant(3));
  SupSearchResult res = xi_sup_search(F, 10, 7, 60000);
  CHECK(res.best_xi == doctest::Approx(tau_rho(3).rho).epsilon(1e-6));
  CHECK(res.best_xi <= tau_rho(3).rho + 1e-7);

  Barrier W(make_weighted_orthant((Vector(2) << 2.0, 2.0).finished()));
  SupSearchResult wres = xi_sup_search(W, 8, 11, 30000);
  CHECK(wres.best_xi == doctest::Approx(1.0774).epsilon(1e-3));
  CHECK(wres.best_xi <= 4.0 / 3.0 + 1e-7);

  Barrier E(make_exp(1));
  SupSearchResult eres = xi_sup_search(E, 4, 13, 8000);
  CHECK(eres.best_xi <= 2.0 * E.theta() + 1e-7);
}

TEST_SUITE_END();
