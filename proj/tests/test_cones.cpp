#include "conik/cones.hpp"

#include "conik/sampling.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace conik;
using namespace conik::testing;

TEST_SUITE_BEGIN("cones");

TEST_CASE("membership verdicts with margins") {
  auto orthant = make_orthant(2);
  Membership m = orthant->contains((Vector(2) << 1.0, 0.0).finished(), 1e-9);
  CHECK(m.verdict == Verdict::boundary);
  CHECK(m.margin == doctest::Approx(0.0));

  auto soc = make_soc({2});
  Membership s = soc->contains((Vector(3) << 3.0, 4.0, 5.0).finished(), 1e-9);
  CHECK(s.verdict == Verdict::boundary);
  CHECK(s.margin == doctest::Approx(0.0));

  auto expc = make_exp(1);
  const double e = std::exp(1.0);
  Membership x = expc->contains((Vector(3) << e, 1.0, 1.0).finished(), 1e-9);
  CHECK(x.verdict == Verdict::boundary);
  CHECK(x.margin == doctest::Approx(0.0));
  CHECK(expc->contains((Vector(3) << e, 1.0, 0.9).finished(), 1e-9).verdict ==
        Verdict::interior);
  CHECK(expc->contains((Vector(3) << e, 1.0, 1.1).finished(), 1e-9).verdict == Verdict::outside);
  // closure ray x2 = 0
  CHECK(expc->contains((Vector(3) << 0.0, 0.0, -1.0).finished(), 1e-9).verdict ==
        Verdict::boundary);
  CHECK(expc->contains((Vector(3) << 1.0, 0.0, 1.0).finished(), 1e-9).verdict ==
        Verdict::outside);

  CHECK_THROWS_AS(orthant->contains(Vector::Ones(3), 1e-9), DimensionError);
}

TEST_CASE("dual membership") {
  auto orthant = make_orthant(2);
  CHECK(orthant->dual_contains((Vector(2) << 1.0, 1.0).finished(), 1e-9).verdict ==
        Verdict::interior);

  // e*1 > 1*exp(0) = 1, hence interior
  auto expc = make_exp(1);
  CHECK(expc->dual_contains((Vector(3) << 1.0, 0.0, -1.0).finished(), 1e-9).verdict ==
        Verdict::interior);
  CHECK(expc->dual_contains((Vector(3) << 0.3, 0.0, -1.0).finished(), 1e-9).verdict ==
        Verdict::outside);

  // weights do not change the cone, only the barrier
  auto weighted = make_weighted_orthant((Vector(2) << 2.0, 3.0).finished());
  CHECK(weighted->dual_contains((Vector(2) << 0.5, 2.0).finished(), 1e-9).verdict ==
        Verdict::interior);
  CHECK(weighted->dual_contains((Vector(2) << -0.5, 2.0).finished(), 1e-9).verdict ==
        Verdict::outside);
}

TEST_CASE("lmi dual membership agrees with the adjoint characterization") {
  // s = A*(Z) with Z psd must be in K*; a certified non-member must fail.
  auto cone = make_toeplitz_tridiag(5);
  const auto& mats = *cone->lmi_mats();
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 3; ++rep) {
    const SymMatrix Z = random_spd(5, rng);
    Vector s(3);
    for (int i = 0; i < 3; ++i) s(i) = (Z.cwiseProduct(mats[i])).sum();
    CHECK(cone->dual_contains(s, 1e-8).verdict == Verdict::interior);
  }
  // <s, x> < 0 at the canonical interior point certifies non-membership.
  Vector bad(3);
  bad << -1.0, 0.0, 0.0;
  CHECK(cone->dual_contains(bad, 1e-8).verdict == Verdict::outside);
}

TEST_CASE("gauge closed forms and examples") {
  auto orthant = make_orthant(2);
  const Vector x = (Vector(2) << 1.0, 1.0).finished();
  const Vector h = (Vector(2) << 2.0, -1.0).finished();
  GaugeResult g = gauge(*orthant, x, h);
  CHECK(g.sigma == doctest::Approx(2.0));
  CHECK(g.boundary_point(0) == doctest::Approx(0.0));
  CHECK(gauge_bisect(*orthant, x, h) == doctest::Approx(2.0).epsilon(1e-10));

  // -h in K gives sigma = 0
  CHECK(gauge_sigma(*orthant, x, (Vector(2) << -1.0, -2.0).finished()) == 0.0);

  auto soc = make_soc({2});
  const Vector xs = (Vector(3) << 0.0, 0.0, 1.0).finished();
  const Vector hs = (Vector(3) << 0.0, 0.0, 2.0).finished();
  CHECK(gauge_sigma(*soc, xs, hs) == doctest::Approx(2.0));

  CHECK(minkowski_norm(*orthant, x, h) == doctest::Approx(2.0));
  CHECK(minkowski_norm(*orthant, x, Vector::Zero(2)) == 0.0);
}

TEST_CASE("gauge closed forms agree with bisection on every cone") {
  for (const auto& cone : cone_catalog()) {
    PairSampler sampler(cone, 101);
    for (int rep = 0; rep < 5; ++rep) {
      const Vector x = sampler.interior_point(0.8);
      Vector h(cone->dim());
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < h.size(); ++i) h(i) = normal(sampler.rng());
      const double closed = gauge_sigma(*cone, x, h);
      const double bisect = gauge_bisect(*cone, x, h);
      CHECK(std::abs(closed - bisect) <= 1e-10 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("gauge positive homogeneity and translate identity") {
  for (const auto& cone : cone_catalog()) {
    PairSampler sampler(cone, 7);
    for (int rep = 0; rep < 6; ++rep) {
      const Vector x = sampler.interior_point(0.8);
      const Vector y = sampler.interior_point(0.8);
      Vector h(cone->dim());
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < h.size(); ++i) h(i) = normal(sampler.rng());

      const double s1 = gauge_sigma(*cone, x, h);
      CHECK(gauge_sigma(*cone, x, 3.5 * h) == doctest::Approx(3.5 * s1).epsilon(1e-10));

      // 1 + sigma_y(x - y) = 1/(1 - sigma_x(x - y))
      const double sy = gauge_sigma(*cone, y, x - y);
      const double sx = gauge_sigma(*cone, x, x - y);
      REQUIRE(sx < 1.0);
      CHECK(1.0 + sy == doctest::Approx(1.0 / (1.0 - sx)).epsilon(1e-9));
    }
  }
}

TEST_CASE("svec round trips and inner products") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const SymMatrix A = random_sym(4, rng);
    const SymMatrix B = random_sym(4, rng);
    const Vector va = mat_to_svec(A), vb = mat_to_svec(B);
    // Euclidean inner product of coordinates equals the trace inner product.
    CHECK(va.dot(vb) == doctest::Approx((A * B).trace()).epsilon(1e-14));
    // Arbitrary matrices round-trip within one ulp...
    const SymMatrix back = svec_to_mat(va);
    CHECK((back - A).cwiseAbs().maxCoeff() <= 3e-16 * A.cwiseAbs().maxCoeff());

    // ...and matrices in the image of svec_to_mat round-trip bit-exactly.
    Vector v(svec_dim(4));
    for (int i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const SymMatrix M = svec_to_mat(v);
    const SymMatrix M2 = svec_to_mat(mat_to_svec(M));
    CHECK((M2 - M).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("lmi slice on the svec basis reproduces the psd cone") {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<SymMatrix> basis(3, SymMatrix::Zero(2, 2));
  basis[0](0, 0) = 1.0;
  basis[1](1, 0) = r;
  basis[1](0, 1) = r;
  basis[2](1, 1) = 1.0;
  auto lmi = make_lmi_slice(SymMatrix(), basis);
  auto psd = make_psd(2);
  REQUIRE(lmi->dim() == psd->dim());
  CHECK(lmi->theta() == psd->theta());

  PairSampler sampler(psd, 17);
  for (int rep = 0; rep < 6; ++rep) {
    const Vector x = sampler.interior_point(0.8);
    Vector h(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 3; ++i) h(i) = normal(sampler.rng());
    CHECK(lmi->contains(x, 1e-10).margin ==
          doctest::Approx(psd->contains(x, 1e-10).margin).epsilon(1e-10));
    CHECK(gauge_sigma(*lmi, x, h) == doctest::Approx(gauge_sigma(*psd, x, h)).epsilon(1e-10));
    CHECK((lmi->hessian(x) - psd->hessian(x)).norm() <= 1e-9 * psd->hessian(x).norm());
  }
}

TEST_CASE("cone spec grammar round trips") {
  for (const char* spec : {"orthant:4", "weighted:2,2", "psd:3", "soc:3,5", "exp:2",
                           "toeplitz-tridiag:5", "exp:1\xE2\x8A\x95soc:3"}) {
    auto cone = parse_cone_spec(spec);
    CHECK(cone->spec_string() == spec);
    auto again = parse_cone_spec(cone->spec_string());
    CHECK(again->dim() == cone->dim());
    CHECK(again->theta() == cone->theta());
  }
  CHECK(parse_cone_spec("exp:1\xE2\x8A\x95soc:3")->theta() == doctest::Approx(5.0));
  CHECK_THROWS_AS(parse_cone_spec("orthant"), DomainError);
  CHECK_THROWS_AS(parse_cone_spec("orthant:x"), DomainError);
  CHECK_THROWS_AS(parse_cone_spec("mystery:3"), DomainError);
  CHECK_THROWS_AS(make_weighted_orthant((Vector(2) << 0.5, 2.0).finished()), DomainError);
}

TEST_SUITE_END();
