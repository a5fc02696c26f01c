#include <doctest.h>

#include <cmath>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

namespace {

double velocity_error(const VectorField& u, Point z) {
  const Grid& g = u.grid();
  double err = 0.0, peak = 0.0;
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const Vec2 v = velocity_profile(Point{g.coord(ix), g.coord(iy)} - z);
      err = std::max(err, std::hypot(u.x(ix, iy) - v.x, u.y(ix, iy) - v.y));
      peak = std::max(peak, v.norm());
    }
  return err / peak;
}

}  // namespace

TEST_CASE("periodic Biot-Savart inverts the curl on mean-zero fields") {
  const Grid g(256, 40.0);
  const ScalarField d1 = d1_gaussian(g);
  const VectorField u = velocity_periodic(d1);
  CHECK(max_diff(curl(u), d1) < 1e-8);
  CHECK(divergence(u).max_abs() < 1e-8);
  CHECK(velocity_periodic(ScalarField(g)).max_magnitude() == 0.0);
  CHECK_THROWS_AS(velocity_periodic(gaussian(g)), CirculationError);
}

TEST_CASE("free-space Biot-Savart reproduces the Oseen velocity") {
  const Grid g(256, 40.0);
  CHECK(velocity_error(velocity_free_space(gaussian(g)), {}) < 1e-3);
  CHECK(velocity_error(velocity_free_space(gaussian(g, {1.5, -2.0})), {1.5, -2.0}) < 1e-3);
  CHECK(velocity_free_space(ScalarField(g)).max_magnitude() == 0.0);
  CHECK_THROWS_AS(velocity_free_space(gaussian(Grid(64, 6.0))), MarginError);
}

TEST_CASE("principal-value kernel converges with resolution") {
  const double e1 = velocity_error(velocity_free_space(gaussian(Grid(128, 40.0)), FreeSpaceKernel::PrincipalValue), {});
  const double e2 = velocity_error(velocity_free_space(gaussian(Grid(256, 40.0)), FreeSpaceKernel::PrincipalValue), {});
  CHECK(e2 < e1);
  CHECK(e2 < 5e-3);
}

TEST_CASE("velocity gradient kernels") {
  const Grid g(256, 40.0);
  const ScalarField G = gaussian(g);
  const VelocityGradient grad = velocity_gradient_free_space(G);
  CHECK(grad.divergence().max_abs() < 1e-8);
  CHECK(max_diff(grad.curl(), G) < 1e-6);
}

TEST_CASE("route selection") {
  const Grid g(128, 20.0);
  const ScalarField d1 = d1_gaussian(g);
  CHECK(max_diff(biot_savart(d1, BiotSavartRoute::Auto).x, velocity_periodic(d1).x) == 0.0);
  const ScalarField G = gaussian(g);
  CHECK(max_diff(biot_savart(G, BiotSavartRoute::Auto).x, velocity_free_space(G).x) == 0.0);
}

TEST_CASE("HLS ratio is scale invariant and homogeneous") {
  const Grid g(256, 40.0);
  const double r1 = hls_ratio(gaussian(g), 4.0 / 3.0);
  CHECK(r1 > 0.0);
  CHECK(std::isfinite(r1));
  for (double lambda : {2.0, 4.0}) {
    const ScalarField w = ScalarField::sample(
        g, [&](double x, double y) { return lambda * lambda * gaussian_profile({lambda * x, lambda * y}); });
    CHECK(std::abs(hls_ratio(w, 4.0 / 3.0) / r1 - 1.0) < 1e-3);
  }
  CHECK(hls_ratio(3.0 * gaussian(g), 4.0 / 3.0) == doctest::Approx(r1).epsilon(1e-12));
  CHECK_THROWS_AS(hls_ratio(gaussian(g), 2.0), DomainError);
}

TEST_CASE("weighted velocity norm is homogeneous") {
  const Grid g(256, 40.0);
  const ScalarField d1 = d1_gaussian(g);
  const double v = weighted_velocity_norm(d1, 4.0, 1.5);
  CHECK(v > 0.0);
  CHECK(std::isfinite(v));
  CHECK(weighted_velocity_norm(2.5 * d1, 4.0, 1.5) == doctest::Approx(2.5 * v).epsilon(1e-12));
  CHECK(weighted_velocity_norm(ScalarField(g), 4.0, 1.5) == 0.0);
}
