#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

TEST_CASE("lp norms of the unit Gaussian") {
  const Grid g(256, 40.0);
  const ScalarField G = gaussian(g);
  CHECK(lp_norm(G, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lp_norm(G, 2.0) == doctest::Approx(1.0 / std::sqrt(8.0 * std::numbers::pi)).epsilon(1e-10));
  CHECK(lp_norm(G, INFINITY) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
  CHECK(lp_norm(ScalarField(g), 1.0) == 0.0);
}

TEST_CASE("weighted_norm matches a radial quadrature oracle") {
  const Grid g(256, 40.0);
  const ScalarField G = gaussian(g);
  CHECK(weighted_norm(G, 2.0, 0.0) == doctest::Approx(lp_norm(G, 2.0)).epsilon(1e-12));
  CHECK(weighted_norm(ScalarField(g), 2.0, 3.0) == 0.0);
  // 2 pi int_0^R (1+r^2)^3 G(r)^2 r dr by composite Simpson.
  const int n = 20000;
  const double R = 20.0, h = R / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double f = std::pow(1.0 + r * r, 3.0) * std::pow(gaussian_profile({r, 0.0}), 2) * r;
    s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  const double oracle = std::sqrt(2.0 * std::numbers::pi * s * h / 3.0);
  CHECK(std::abs(weighted_norm(G, 2.0, 3.0) / oracle - 1.0) < 1e-6);
}

TEST_CASE("spectral derivatives") {
  const Grid g(256, 40.0);
  const ScalarField c = ScalarField::sample(g, [](double, double) { return 3.0; });
  const VectorField gc = gradient(c);
  CHECK(gc.x.max_abs() < 1e-14);
  CHECK(gc.y.max_abs() < 1e-14);
  const ScalarField G = gaussian(g);
  const ScalarField dG = ScalarField::sample(g, [](double x, double y) { return gaussian_gradient({x, y}).x; });
  CHECK(max_diff(gradient(G).x, dG) < 1e-12);
  const ScalarField lap = ScalarField::sample(g, [](double x, double y) {
    const double r2 = x * x + y * y;
    return (r2 / 4.0 - 1.0) * gaussian_profile({x, y});
  });
  CHECK(max_diff(laplacian(G), lap) < 1e-12);
}

TEST_CASE("divergence of the sampled Oseen velocity") {
  const Grid g(256, 40.0);
  const VectorField v(ScalarField::sample(g, [](double x, double y) { return velocity_profile({x, y}).x; }),
                      ScalarField::sample(g, [](double x, double y) { return velocity_profile({x, y}).y; }));
  // The 1/r tail is not periodic; away from the wrap the spectral divergence is small.
  const ScalarField div = divergence(v);
  double inner = 0.0;
  for (int iy = 96; iy < 160; ++iy)
    for (int ix = 96; ix < 160; ++ix) inner = std::max(inner, std::abs(div(ix, iy)));
  CHECK(inner < 1e-6);
  // Free-space gradient kernels give the divergence without the wrap.
  CHECK(velocity_gradient_free_space(gaussian(g)).divergence().max_abs() < 1e-12);
}

TEST_CASE("project_mean_zero") {
  const Grid g(256, 40.0);
  const ScalarField G = gaussian(g), d1 = d1_gaussian(g);
  CHECK(max_diff(project_mean_zero(d1), d1) < 1e-15);
  CHECK(project_mean_zero(G).max_abs() < 1e-15);
  CHECK(max_diff(project_mean_zero(2.0 * G + d1), d1) < 1e-10);
}

TEST_CASE("heat flow is exact on Gaussians") {
  const Grid g(256, 40.0);
  const ScalarField G = gaussian(g);
  const ScalarField G2 =
      ScalarField::sample(g, [](double x, double y) { return 0.5 * gaussian_profile({x / std::sqrt(2.0), y / std::sqrt(2.0)}); });
  CHECK(max_diff(heat_flow(G, 1.0), G2) < 1e-14);
}

TEST_CASE("resample scales and translates") {
  const Grid g(256, 40.0);
  const ScalarField shifted = gaussian(g, {1.0, -0.5});
  const ScalarField back = resample(shifted, g, {1.0, -0.5}, 1.0);
  CHECK(max_diff(back, gaussian(g)) < 1e-8);
}

TEST_CASE("boundary ratio guards") {
  const Grid g(128, 20.0);
  CHECK(boundary_ratio(gaussian(g)) < 1e-10);
  const Grid small(64, 6.0);
  CHECK_THROWS_AS(require_boundary_decay(gaussian(small), 1e-10, "test"), MarginError);
}

TEST_CASE("field files round-trip bit-exactly") {
  const Grid g(32, 10.0);
  const ScalarField f = gaussian(g, {0.3, 0.1}) + 1e-3 * d1_gaussian(g);
  const auto path = std::filesystem::temp_directory_path() / "nsm_field_test.fld";
  write_field(path, f);
  const ScalarField back = read_field(path);
  CHECK(back.grid() == g);
  CHECK(max_diff(back, f) == 0.0);
  CHECK_THROWS_AS(read_field(path.string() + ".missing"), ConfigError);
}
