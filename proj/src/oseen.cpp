#include "nsm/oseen.hpp"

#include <cmath>
#include <numbers>

#include "nsm/errors.hpp"

namespace nsm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCutoff = 1e-4;

}  // namespace

double gaussian_profile(Point xi) { return std::exp(-0.25 * xi.norm2()) / (4.0 * kPi); }

Vec2 gaussian_gradient(Point xi) { return xi * (-0.5 * gaussian_profile(xi)); }

Vec2 velocity_profile(Point xi) {
  const double r2 = xi.norm2();
  if (r2 < kSeriesCutoff * kSeriesCutoff) {
    // (1 - e^{-s})/s with s = r^2/4, expanded to second order.
    const double s = 0.25 * r2;
    return xi.perp() * ((1.0 - 0.5 * s + s * s / 6.0) / (8.0 * kPi));
  }
  return xi.perp() * (-std::expm1(-0.25 * r2) / (2.0 * kPi * r2));
}

double velocity_profile_max() {
  static const double value = [] {
    // |v^G| as a function of r is unimodal; golden-section search.
    auto f = [](double r) { return -std::expm1(-0.25 * r * r) / (2.0 * kPi * r); };
    double a = 0.5, b = 5.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
      const double c = b - g * (b - a);
      const double d = a + g * (b - a);
      if (f(c) > f(d)) b = d; else a = c;
    }
    return f(0.5 * (a + b));
  }();
  return value;
}

double OseenVortex::vorticity(Point x, double t) const {
  return alpha / t * gaussian_profile((x - z) / std::sqrt(t));
}

Vec2 OseenVortex::velocity(Point x, double t) const {
  const double s = std::sqrt(t);
  return velocity_profile((x - z) / s) * (alpha / s);
}

Vec2 OseenVortex::vorticity_gradient(Point x, double t) const {
  const double s = std::sqrt(t);
  return gaussian_gradient((x - z) / s) * (alpha / (t * s));
}

double OseenVortex::vorticity_rate(Point x, double t) const {
  const Point xi = (x - z) / std::sqrt(t);
  return alpha / (t * t) * gaussian_profile(xi) * (0.25 * xi.norm2() - 1.0);
}

std::pair<ScalarField, VectorField> oseen_fields(const OseenVortex& v, double t, const Grid& grid) {
  if (!(t > 0.0)) throw DomainError("oseen_fields: t must be positive");
  ScalarField omega(grid);
  VectorField u(grid);
  for (int iy = 0; iy < grid.n(); ++iy) {
    for (int ix = 0; ix < grid.n(); ++ix) {
      const Point x{grid.coord(ix), grid.coord(iy)};
      omega(ix, iy) = v.vorticity(x, t);
      const Vec2 vel = v.velocity(x, t);
      u.x(ix, iy) = vel.x;
      u.y(ix, iy) = vel.y;
    }
  }
  return {std::move(omega), std::move(u)};
}

double oseen_residual(const OseenVortex& v, double t, const Grid& grid) {
  if (!(t > 0.0)) throw DomainError("oseen_residual: t must be positive");
  if (v.alpha == 0.0) return 0.0;
  auto [omega, u] = oseen_fields(v, t, grid);
  require_boundary_decay(omega, 1e-10, "oseen_residual");
  const ScalarField lap = laplacian(omega);
  const VectorField grad = gradient(omega);
  double worst = 0.0;
  for (int iy = 0; iy < grid.n(); ++iy) {
    for (int ix = 0; ix < grid.n(); ++ix) {
      const Point x{grid.coord(ix), grid.coord(iy)};
      const double r = v.vorticity_rate(x, t) - lap(ix, iy) + u.x(ix, iy) * grad.x(ix, iy) + u.y(ix, iy) * grad.y(ix, iy);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace nsm
