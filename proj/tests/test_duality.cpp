#include "conik/duality.hpp"

#include "conik/sampling.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace conik;
using namespace conik::testing;

TEST_SUITE_BEGIN("duality");

TEST_CASE("shadows in closed form") {
  Barrier F(make_orthant(2));
  const Vector s = shadow_dual(F, (Vector(2) << 1.0, 2.0).finished());
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(0.5));

  Barrier P(make_psd(2));
  const Vector xt = shadow_dual(P, mat_to_svec(2.0 * Eigen::MatrixXd::Identity(2, 2)));
  CHECK((svec_to_mat(xt) - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-14);

  const Vector st = shadow_primal(F, (Vector(2) << 3.0, 1.0).finished());
  CHECK(st(0) == doctest::Approx(1.0 / 3.0));
  CHECK(st(1) == doctest::Approx(1.0));
}

TEST_CASE("shadow of the shadow is the point") {
  for (const auto& cone : cone_catalog()) {
    Barrier F(cone);
    PairSampler sampler(cone, 61);
    for (int rep = 0; rep < 4; ++rep) {
      const Vector x = sampler.interior_point(0.7);
      const Vector s = shadow_dual(F, x);
      CHECK(cone->dual_contains(s, 1e-10).verdict == Verdict::interior);
      const Vector back = shadow_primal(F, s);
      CHECK((back - x).norm() <= 1e-9 * (1.0 + x.norm()));

      const Vector sd = sampler.dual_interior_point(0.7);
      const Vector xp = shadow_primal(F, sd);
      const Vector sd_back = shadow_dual(F, xp);
      CHECK((sd_back - sd).norm() <= 1e-9 * (1.0 + sd.norm()));
    }
  }
}

TEST_CASE("exp-cone Newton shadow meets the residual contract") {
  Barrier F(make_exp(1));
  const Vector s = (Vector(3) << 1.0, 1.0, -1.0).finished();
  NewtonReport rep = shadow_primal_newton(F, s);
  REQUIRE(rep.converged);
  CHECK(rep.residual <= 1e-11);
  // re-evaluate F' at the solution
  const Vector grad = F.gradient(rep.z);
  const SymMatrix H = F.hessian(rep.z);
  CholFactor C = chol_factor(H);
  REQUIRE(C.ok);
  const Vector r = grad + s;
  CHECK(std::sqrt(r.dot(chol_solve(C, r))) <= 1e-10);

  CHECK_THROWS_AS(shadow_primal(F, (Vector(3) << 0.3, 0.0, -1.0).finished()), DomainError);
}

TEST_CASE("dual Hessian identities") {
  Barrier F(make_orthant(2));
  const SymMatrix D = dual_hessian(F, (Vector(2) << 3.0, 1.0).finished());
  CHECK(D(0, 0) == doctest::Approx(1.0 / 9.0));
  CHECK(D(1, 1) == doctest::Approx(1.0));

  // F''_*(-F'(x)) = F''(x)^{-1} on every cone
  for (const auto& cone : cone_catalog()) {
    Barrier G(cone);
    PairSampler sampler(cone, 67);
    const Vector x = sampler.interior_point(0.7);
    const SymMatrix Dg = dual_hessian(G, shadow_dual(G, x));
    const SymMatrix H = G.hessian(x);
    CHECK((Dg * H - SymMatrix::Identity(H.rows(), H.cols())).norm() <= 1e-8 * std::sqrt(1.0 * H.rows()));
  }

  // exp cone: product with the Hessian at the shadow is the identity
  Barrier E(make_exp(1));
  PairSampler sampler(E.cone_ptr(), 71);
  const Vector s = sampler.dual_interior_point(0.7);
  const SymMatrix De = dual_hessian(E, s);
  const Vector xt = shadow_primal(E, s);
  CHECK((De * E.hessian(xt) - SymMatrix::Identity(3, 3)).norm() <= 1e-9);
}

TEST_CASE("make_pair computes the bilinear data") {
  Barrier F(make_orthant(2));
  PrimalDualPair p = make_pair(F, (Vector(2) << 1.0, 2.0).finished(),
                               (Vector(2) << 3.0, 1.0).finished());
  CHECK(p.mu == doctest::Approx(2.5));
  CHECK(p.mu_tilde == doctest::Approx(5.0 / 12.0));
  CHECK(p.mu * p.mu_tilde == doctest::Approx(25.0 / 24.0));
  CHECK_FALSE(is_central(p, 1e-9));

  // central pair s = -mu F'(x)
  const Vector x = (Vector(2) << 0.7, 1.9).finished();
  PrimalDualPair c = make_pair(F, x, 1.7 * shadow_dual(F, x));
  CHECK(c.mu * c.mu_tilde == doctest::Approx(1.0));
  CHECK(is_central(c, 1e-12));

  // x = mu x~ constructed from s is the equivalent characterization
  const Vector s = (Vector(2) << 2.0, 5.0).finished();
  const Vector xt = shadow_primal(F, s);
  PrimalDualPair c2 = make_pair(F, 0.3 * xt, s);
  CHECK(is_central(c2, 1e-12));

  Barrier P(make_psd(2));
  PrimalDualPair pp = make_pair(P, mat_to_svec(Eigen::MatrixXd::Identity(2, 2)),
                                mat_to_svec(Eigen::Vector2d(1.0, 4.0).asDiagonal()));
  CHECK(pp.mu == doctest::Approx(2.5));
  CHECK(pp.mu_tilde == doctest::Approx(0.625));
}

TEST_CASE("mu mu~ >= 1 with equality only at central pairs") {
  for (const auto& cone : cone_catalog()) {
    PairSampler sampler(cone, 73);
    for (int rep = 0; rep < 10; ++rep) {
      PrimalDualPair p = sampler.pair(0.85);
      CHECK(p.mu * p.mu_tilde >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("gradient bound of the local norm on cone directions") {
  // <-F'(x), u> <= sqrt(theta) ||u||_x <= sqrt(theta) <-F'(x), u>
  for (const auto& cone : cone_catalog()) {
    Barrier F(cone);
    PairSampler sampler(cone, 79);
    const double rt = std::sqrt(F.theta());
    for (int rep = 0; rep < 6; ++rep) {
      const Vector x = sampler.interior_point(0.8);
      const Vector u = sampler.interior_point(0.8);
      const double lhs = -F.gradient(x).dot(u);
      const double un = F.local_norm(x, u);
      CHECK(lhs <= rt * un * (1.0 + 1e-9));
      CHECK(rt * un <= rt * lhs * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("two-sided Hessian bound between a point and its shadow") {
  // F''(x~)/(4 theta^2 mu^2) <= F''(x) <= 4 theta^2 mu~^2 F''(x~)
  for (const auto& cone : cone_catalog()) {
    PairSampler sampler(cone, 83);
    for (int rep = 0; rep < 5; ++rep) {
      PrimalDualPair p = sampler.pair(0.8);
      const double th = p.theta();
      const SymMatrix Hx = p.barrier.hessian(p.x);
      const SymMatrix Hxt = p.cone().hessian(p.x_shadow);
      const double c1 = 4.0 * th * th * p.mu * p.mu;
      const double c2 = 4.0 * th * th * p.mu_tilde * p.mu_tilde;
      CHECK(min_eig_diff(SymMatrix(Hxt / c1), Hx) >= -1e-8 * Hxt.norm() / c1);
      CHECK(min_eig_diff(Hx, SymMatrix(c2 * Hxt)) >= -1e-8 * c2 * Hxt.norm());
    }
  }
}

TEST_SUITE_END();
