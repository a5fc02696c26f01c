#pragma once

#include "nsm/field.hpp"

namespace nsm {

/// Kernel used by the zero-padded free-space Biot-Savart convolution.
enum class FreeSpaceKernel {
  /// Lag samples of the band-limited truncated log kernel (spectrally accurate
  /// for smooth fields).
  Spectral,
  /// Point samples of x^perp / (2 pi |x|^2), zero at the origin.
  PrincipalValue,
};

/// How a caller picks between the periodic and free-space methods.
enum class BiotSavartRoute {
  /// Periodic when |circulation| < 1e-8 ||omega||_1, free-space otherwise.
  Auto,
  Periodic,
  FreeSpace,
};

/// Spectral inversion on the periodic box; zero mode discarded. Throws
/// CirculationError unless |integral(omega)| < 1e-8 ||omega||_{L^1}.
VectorField velocity_periodic(const ScalarField& omega);

/// Aperiodic convolution with the planar Biot-Savart kernel via zero padding
/// to 2n x 2n. Throws MarginError unless omega has decayed below
/// 1e-10 ||omega||_inf on the outer ring of the box.
VectorField velocity_free_space(const ScalarField& omega, FreeSpaceKernel kernel = FreeSpaceKernel::Spectral);

/// Spatial derivatives of the free-space velocity, obtained by convolving
/// with differentiated spectral kernels (no periodic differentiation of the
/// slowly decaying velocity tail).
struct VelocityGradient {
  ScalarField dx_ux, dy_ux, dx_uy, dy_uy;

  ScalarField divergence() const;
  ScalarField curl() const;
};

VelocityGradient velocity_gradient_free_space(const ScalarField& omega);

/// Dispatches according to `route`.
VectorField biot_savart(const ScalarField& omega, BiotSavartRoute route);

/// ||u||_{L^q} / ||omega||_{L^p} with 1/q = 1/p - 1/2 and u the free-space
/// velocity. The velocity norm includes the analytic far-field contribution
/// of the total circulation outside the box. p must lie in (1, 2).
double hls_ratio(const ScalarField& omega, double p);

/// || (1+|x|^2)^{(m - 2/q)/2} u ||_{L^q} for the free-space velocity u.
/// Requires q > 2 and either m in (0,1), or m in (1,2) with zero circulation.
double weighted_velocity_norm(const ScalarField& omega, double q, double m);

}  // namespace nsm
