#pragma once

#include <utility>

#include "nsm/field.hpp"
#include "nsm/geometry.hpp"

namespace nsm {

/// Unit Gaussian G(xi) = exp(-|xi|^2/4) / (4 pi); integrates to one.
double gaussian_profile(Point xi);
/// grad G(xi) = -xi G(xi) / 2.
Vec2 gaussian_gradient(Point xi);

/// Oseen velocity profile v^G(xi) = xi^perp (1 - exp(-|xi|^2/4)) / (2 pi |xi|^2),
/// the Biot-Savart image of G. Uses the small-|xi| series below |xi| = 1e-4.
Vec2 velocity_profile(Point xi);
/// max over xi of |v^G(xi)| (attained near |xi| = 2.24).
double velocity_profile_max();

/// Lamb-Oseen vortex of circulation `alpha` centered at `z`.
struct OseenVortex {
  double alpha = 0.0;
  Point z;

  /// alpha/t G((x - z)/sqrt(t)).
  double vorticity(Point x, double t) const;
  /// alpha/sqrt(t) v^G((x - z)/sqrt(t)).
  Vec2 velocity(Point x, double t) const;
  /// Spatial gradient of vorticity(x, t).
  Vec2 vorticity_gradient(Point x, double t) const;
  /// d/dt vorticity(x, t) = Laplacian of vorticity(x, t).
  double vorticity_rate(Point x, double t) const;
};

/// Samples vorticity and velocity of `v` at time t > 0.
std::pair<ScalarField, VectorField> oseen_fields(const OseenVortex& v, double t, const Grid& grid);

/// max |d_t omega - Laplacian(omega) + u . grad(omega)| on the grid, with the
/// time derivative and velocity analytic and the spatial derivatives spectral.
double oseen_residual(const OseenVortex& v, double t, const Grid& grid);

}  // namespace nsm
