#include "nsm/selfsim.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "nsm/errors.hpp"

namespace nsm {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kMargin = 1e-10;

// K(i, j) = h exp(-(xi_i - eta_j c)^2 / (4a)) / sqrt(4 pi a), c = e^{-tau/2}.
RowMatrix kernel_matrix(const Grid& g, double tau) {
  const int n = g.n();
  const double a = -std::expm1(-tau);
  const double c = std::exp(-0.5 * tau);
  const double scale = g.spacing() / std::sqrt(4.0 * std::numbers::pi * a);
  RowMatrix K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = g.coord(i) - g.coord(j) * c;
      K(i, j) = scale * std::exp(-d * d / (4.0 * a));
    }
  return K;
}

}  // namespace

SelfSimilarFrame SelfSimilarFrame::at_time(double t, Point center) {
  if (!(t > 0.0)) throw DomainError("SelfSimilarFrame: t must be positive");
  return {center, std::log(t), t};
}

SelfSimilarFrame SelfSimilarFrame::at_tau(double tau, Point center) { return {center, tau, std::exp(tau)}; }

ScalarField to_self_similar(const ScalarField& omega, const SelfSimilarFrame& frame, const Grid& xi_grid) {
  require_boundary_decay(omega, kMargin, "to_self_similar (source)");
  const double s = std::sqrt(frame.t);
  ScalarField w = resample(omega, xi_grid, frame.center, s);
  w *= frame.t;
  require_boundary_decay(w, kMargin, "to_self_similar (target)");
  return w;
}

ScalarField from_self_similar(const ScalarField& w, const SelfSimilarFrame& frame, const Grid& x_grid) {
  require_boundary_decay(w, kMargin, "from_self_similar (source)");
  const double s = std::sqrt(frame.t);
  ScalarField omega = resample(w, x_grid, frame.center * (-1.0 / s), 1.0 / s);
  omega *= 1.0 / frame.t;
  require_boundary_decay(omega, kMargin, "from_self_similar (target)");
  return omega;
}

ScalarField apply_fokker_planck(const ScalarField& w) {
  require_boundary_decay(w, kMargin, "apply_fokker_planck");
  const Grid& g = w.grid();
  ScalarField out = laplacian(w);
  const VectorField grad = gradient(w);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      out(ix, iy) += 0.5 * (g.coord(ix) * grad.x(ix, iy) + g.coord(iy) * grad.y(ix, iy)) + w(ix, iy);
  return out;
}

ScalarField semigroup_apply(double tau, const ScalarField& f) {
  if (tau < 0.0) throw DomainError("semigroup_apply: tau must be nonnegative");
  if (tau == 0.0) return f;
  require_boundary_decay(f, kMargin, "semigroup_apply");
  const Grid& g = f.grid();
  const int n = g.n();
  const double a = -std::expm1(-tau);

  // The kernel's standard deviation in eta is sqrt(2a) e^{tau/2}; the
  // rectangle rule is spectrally accurate once it spans a cell and a half.
  if (std::sqrt(2.0 * a) * std::exp(0.5 * tau) >= 1.5 * g.spacing()) {
    const RowMatrix K = kernel_matrix(g, tau);
    Eigen::Map<const RowMatrix> F(f.values().data(), n, n);
    const RowMatrix out = K * F * K.transpose();
    return ScalarField(g, std::vector<double>(out.data(), out.data() + out.size()));
  }
  ScalarField heated = heat_flow(f, std::expm1(tau));
  ScalarField out = resample(heated, g, {}, std::exp(0.5 * tau));
  out *= std::exp(tau);
  return out;
}

double commutation_residual(double tau, const ScalarField& f) {
  const VectorField lhs = gradient(semigroup_apply(tau, f));
  const VectorField grad = gradient(f);
  const double e = std::exp(0.5 * tau);
  const ScalarField rx = lhs.x - e * semigroup_apply(tau, grad.x);
  const ScalarField ry = lhs.y - e * semigroup_apply(tau, grad.y);
  return std::max(rx.max_abs(), ry.max_abs());
}

}  // namespace nsm
