#include <doctest.h>

#include <cmath>

#include "nsm/errors.hpp"
#include "nsm/random_field.hpp"
#include "nsm/selfsim.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

TEST_CASE("self-similar frames") {
  const auto f = SelfSimilarFrame::at_time(std::exp(2.0));
  CHECK(f.tau == doctest::Approx(2.0));
  CHECK(SelfSimilarFrame::at_tau(1.0).t == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("to_self_similar maps Oseen to alpha G") {
  const Grid x(256, 40.0), xi(128, 20.0);
  for (double t : {0.5, 2.0}) {
    const auto [w, u] = oseen_fields({3.0, {}}, t, x);
    CHECK(max_diff(to_self_similar(w, SelfSimilarFrame::at_time(t), xi), 3.0 * gaussian(xi)) < 1e-8);
  }
  CHECK(to_self_similar(ScalarField(x), SelfSimilarFrame::at_time(1.0), xi).max_abs() == 0.0);
}

TEST_CASE("from_self_similar") {
  const Grid xi(128, 20.0), x(256, 40.0);
  const ScalarField G = gaussian(xi);
  const ScalarField w4 = from_self_similar(G, SelfSimilarFrame::at_time(4.0), x);
  CHECK(w4.max_abs() == doctest::Approx(1.0 / (16.0 * M_PI)).epsilon(1e-8));
  CHECK(max_diff(from_self_similar(G, SelfSimilarFrame::at_time(1.0), xi), G) < 1e-12);
  CHECK(max_diff(from_self_similar(2.0 * G, SelfSimilarFrame::at_time(4.0), x), 2.0 * w4) < 1e-15);
}

TEST_CASE("Fokker-Planck operator eigenfunctions") {
  const Grid g(128, 24.0);
  CHECK(apply_fokker_planck(gaussian(g)).max_abs() < 1e-8);
  const ScalarField d1 = d1_gaussian(g);
  CHECK(max_diff(apply_fokker_planck(d1), -0.5 * d1) < 1e-8);
  CHECK(apply_fokker_planck(ScalarField(g)).max_abs() == 0.0);
}

TEST_CASE("semigroup on eigenfunctions") {
  const Grid g(128, 24.0);
  const ScalarField G = gaussian(g), d1 = d1_gaussian(g);
  CHECK(max_diff(semigroup_apply(1.0, G), G) < 1e-8);
  CHECK(max_diff(semigroup_apply(1.0, d1), std::exp(-0.5) * d1) < 1e-8);
  const ScalarField r = random_band_limited(g, 42);
  CHECK(rel_l2(semigroup_apply(1e-4, r), r) < 1e-3);
  CHECK(max_diff(semigroup_apply(0.0, r), r) == 0.0);
  CHECK_THROWS_AS(semigroup_apply(-1.0, r), DomainError);
}

TEST_CASE("semigroup law across both evaluation routes") {
  const Grid g(128, 24.0);
  const ScalarField r = random_band_limited(g, 7);
  // 0.05 uses the heat-flow route, larger times the direct quadrature.
  CHECK(rel_l2(semigroup_apply(0.05, semigroup_apply(1.0, r)), semigroup_apply(1.05, r)) < 1e-6);
  CHECK(rel_l2(semigroup_apply(0.5, semigroup_apply(0.5, r)), semigroup_apply(1.0, r)) < 1e-6);
}

TEST_CASE("gradient commutation") {
  const Grid g(128, 24.0);
  const ScalarField G = gaussian(g);
  const double grad_scale = gradient(G).x.max_abs();
  CHECK(commutation_residual(1.0, G) < 1e-8 * grad_scale);
  const ScalarField r = random_band_limited(g, 42);
  const double rs = gradient(semigroup_apply(0.5, r)).x.max_abs();
  CHECK(commutation_residual(0.5, r) < 1e-6 * rs);
  CHECK(commutation_residual(1.0, ScalarField(g)) == 0.0);
}

TEST_CASE("seeded random fields are deterministic") {
  const Grid g(64, 20.0);
  CHECK(max_diff(random_band_limited(g, 3), random_band_limited(g, 3)) == 0.0);
  CHECK(max_diff(random_band_limited(g, 3), random_band_limited(g, 4)) > 0.0);
  CounterRng a(1), b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CounterRng c(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}
