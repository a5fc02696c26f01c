#pragma once

#include "nsm/field.hpp"
#include "nsm/geometry.hpp"

namespace nsm {

/// Self-similar clock around `center`: xi = (x - center)/sqrt(t), tau = log t.
struct SelfSimilarFrame {
  Point center;
  double tau = 0.0;
  double t = 1.0;

  static SelfSimilarFrame at_time(double t, Point center = {});
  static SelfSimilarFrame at_tau(double tau, Point center = {});
};

/// w(xi) = t omega(center + xi sqrt(t)) on `xi_grid`, by trigonometric
/// interpolation. Throws MarginError when the result has not decayed at the
/// edge of `xi_grid` or omega has not decayed at the edge of its own box.
ScalarField to_self_similar(const ScalarField& omega, const SelfSimilarFrame& frame, const Grid& xi_grid);

/// omega(x) = w((x - center)/sqrt(t)) / t on `x_grid`; inverse of the above.
ScalarField from_self_similar(const ScalarField& w, const SelfSimilarFrame& frame, const Grid& x_grid);

/// L w = Laplacian w + xi.grad(w)/2 + w, spectral derivatives, xi unwrapped.
/// Throws MarginError unless w has decayed below 1e-10 max|w| at the edge.
ScalarField apply_fokker_planck(const ScalarField& w);

/// S(tau) f = exp(tau L) f from the explicit Gaussian kernel
///   (S f)(xi) = 1/(4 pi a) int exp(-|xi - eta e^{-tau/2}|^2 / (4a)) f(eta) d eta,
/// a = 1 - e^{-tau}. Separable direct quadrature when the kernel is resolved
/// by the grid, otherwise heat flow over e^tau - 1 followed by dilation.
/// tau = 0 returns f. DomainError for tau < 0, MarginError if f has not
/// decayed at the edge.
ScalarField semigroup_apply(double tau, const ScalarField& f);

/// max over both components of |grad S(tau) f - e^{tau/2} S(tau) grad f|.
double commutation_residual(double tau, const ScalarField& f);

}  // namespace nsm
