#include "nsm/biot_savart.hpp"

#include <math.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <tuple>

#include "nsm/errors.hpp"
#include "nsm/fft.hpp"

namespace nsm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> I{0.0, 1.0};

// Fourier transform of (1/2pi) log|x| restricted to the disc |x| <= R.
double truncated_log_transform(double k, double R) {
  if (k == 0.0) return 0.25 * R * R * (2.0 * std::log(R) - 1.0);
  const double kr = k * R;
  return R * std::log(R) * ::j1(kr) / k - (1.0 - ::j0(kr)) / (k * k);
}

// Spectra (on the 2n zero-padded grid) of convolution kernels, already
// scaled by the cell area so that (K * omega) = IFFT(K_hat * omega_hat).
struct PaddedKernels {
  std::vector<Spectrum> spectra;
};

std::vector<double> principal_value_lags(const Grid& g, int component) {
  const int n = g.n();
  const int m = 2 * n;
  const double h = g.spacing();
  std::vector<double> lags(static_cast<std::size_t>(m) * m, 0.0);
  for (int b = 0; b < m; ++b) {
    const double y = (b < n ? b : b - m) * h;
    for (int a = 0; a < m; ++a) {
      const double x = (a < n ? a : a - m) * h;
      const double r2 = x * x + y * y;
      if (r2 == 0.0) continue;
      lags[static_cast<std::size_t>(b) * m + a] = (component == 0 ? -y : x) / (2.0 * kPi * r2);
    }
  }
  return lags;
}

// Fourier multiplier applied to the truncated log kernel, as a function of
// the (Nyquist-zeroed) wavenumbers.
using Multiplier = std::complex<double> (*)(double kx, double ky);

// Lag samples of band-limited kernels derived from the truncated log kernel.
// Its transform is sampled on a 4n grid (period 4L > L + sqrt(2) L) and
// transformed back; lags within [-L, L] are then copied to the 2n grid.
std::vector<std::vector<double>> spectral_lags(const Grid& g, std::span<const Multiplier> multipliers) {
  const int n = g.n();
  const int big = 4 * n;
  const double h = g.spacing();
  const double R = std::sqrt(2.0) * g.box_size();
  Grid big_grid(big, big * h);
  const Wavenumbers k(big_grid);

  // The transform depends on |k| only; tabulate per distinct index radius.
  Spectrum F(big_grid);
  std::map<long, double> by_radius;
  for (int r = 0; r < F.rows(); ++r) {
    const long jr = r <= big / 2 ? r : r - big;
    for (int c = 0; c < F.cols(); ++c) {
      const long key = jr * jr + static_cast<long>(c) * c;
      auto it = by_radius.find(key);
      if (it == by_radius.end()) {
        it = by_radius.emplace(key, truncated_log_transform(std::hypot(k.kx[c], k.ky[r]), R)).first;
      }
      F.at(r, c) = it->second / (h * h);
    }
  }

  const int m = 2 * n;
  std::vector<std::vector<double>> out;
  std::vector<double> full(big_grid.size());
  for (Multiplier mult : multipliers) {
    Spectrum s(big_grid);
    for (int r = 0; r < s.rows(); ++r)
      for (int c = 0; c < s.cols(); ++c) s.at(r, c) = mult(k.dx[c], k.dy[r]) * F.at(r, c);
    RealFft2d::for_size(big).inverse(s.coeffs(), full);
    std::vector<double> lags(static_cast<std::size_t>(m) * m);
    for (int b = 0; b < m; ++b) {
      const int src_b = ((b < n ? b : b - m) + big) % big;
      for (int a = 0; a < m; ++a) {
        const int src_a = ((a < n ? a : a - m) + big) % big;
        lags[static_cast<std::size_t>(b) * m + a] = full[static_cast<std::size_t>(src_b) * big + src_a];
      }
    }
    out.push_back(std::move(lags));
  }
  return out;
}

// u = grad^perp psi with psi = (1/2pi) log|x| * omega.
constexpr Multiplier kVelocity[] = {
    [](double, double ky) { return -I * ky; },
    [](double kx, double) { return I * kx; },
};
// d_x u_x, d_y u_x, d_x u_y, d_y u_y.
constexpr Multiplier kVelocityGradient[] = {
    [](double kx, double ky) { return std::complex<double>(kx * ky); },
    [](double, double ky) { return std::complex<double>(ky * ky); },
    [](double kx, double) { return std::complex<double>(-kx * kx); },
    [](double kx, double ky) { return std::complex<double>(-kx * ky); },
};

enum class KernelSet { SpectralVelocity, PrincipalValueVelocity, SpectralGradient };

const PaddedKernels& padded_kernels(const Grid& g, KernelSet set) {
  thread_local std::map<std::tuple<int, double, int>, std::unique_ptr<PaddedKernels>> cache;
  auto& slot = cache[{g.n(), g.box_size(), static_cast<int>(set)}];
  if (slot) return *slot;

  std::vector<std::vector<double>> lags;
  switch (set) {
    case KernelSet::PrincipalValueVelocity:
      lags.push_back(principal_value_lags(g, 0));
      lags.push_back(principal_value_lags(g, 1));
      break;
    case KernelSet::SpectralVelocity:
      lags = spectral_lags(g, kVelocity);
      break;
    case KernelSet::SpectralGradient:
      lags = spectral_lags(g, kVelocityGradient);
      break;
  }
  const Grid pg = g.padded();
  const double area = g.spacing() * g.spacing();
  slot = std::make_unique<PaddedKernels>();
  for (auto& l : lags) {
    for (double& v : l) v *= area;
    slot->spectra.push_back(transform(ScalarField(pg, std::move(l))));
  }
  return *slot;
}

// Aperiodic convolution of omega with each kernel of the set.
std::vector<ScalarField> convolve_padded(const ScalarField& omega, const PaddedKernels& K) {
  const Grid& g = omega.grid();
  const int n = g.n();
  const Grid pg = g.padded();
  ScalarField padded(pg);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) padded(ix, iy) = omega(ix, iy);
  const Spectrum w = transform(padded);
  std::vector<ScalarField> out;
  Spectrum s(pg);
  for (const Spectrum& kernel : K.spectra) {
    for (std::size_t i = 0; i < w.coeffs().size(); ++i) s.coeffs()[i] = kernel.coeffs()[i] * w.coeffs()[i];
    const ScalarField full = inverse_transform(s);
    ScalarField cropped(g);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) cropped(ix, iy) = full(ix, iy);
    out.push_back(std::move(cropped));
  }
  return out;
}

}  // namespace

VectorField velocity_periodic(const ScalarField& omega) {
  const double l1 = lp_norm(omega, 1.0);
  if (std::abs(omega.integral()) >= 1e-8 * l1 && l1 > 0.0)
    throw CirculationError("velocity_periodic: field has nonzero circulation");
  const Spectrum s = transform(omega);
  const Wavenumbers k(omega.grid());
  Spectrum ux(omega.grid()), uy(omega.grid());
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) {
      const double k2 = k.kx[c] * k.kx[c] + k.ky[r] * k.ky[r];
      if (k2 == 0.0) continue;
      ux.at(r, c) = I * k.dy[r] * s.at(r, c) / k2;
      uy.at(r, c) = -I * k.dx[c] * s.at(r, c) / k2;
    }
  }
  return VectorField(inverse_transform(ux), inverse_transform(uy));
}

VectorField velocity_free_space(const ScalarField& omega, FreeSpaceKernel kernel) {
  require_boundary_decay(omega, 1e-10, "velocity_free_space");
  const auto set = kernel == FreeSpaceKernel::Spectral ? KernelSet::SpectralVelocity : KernelSet::PrincipalValueVelocity;
  auto parts = convolve_padded(omega, padded_kernels(omega.grid(), set));
  return VectorField(std::move(parts[0]), std::move(parts[1]));
}

VelocityGradient velocity_gradient_free_space(const ScalarField& omega) {
  require_boundary_decay(omega, 1e-10, "velocity_gradient_free_space");
  auto parts = convolve_padded(omega, padded_kernels(omega.grid(), KernelSet::SpectralGradient));
  return VelocityGradient{std::move(parts[0]), std::move(parts[1]), std::move(parts[2]), std::move(parts[3])};
}

ScalarField VelocityGradient::divergence() const { return dx_ux + dy_uy; }

ScalarField VelocityGradient::curl() const { return dx_uy - dy_ux; }

VectorField biot_savart(const ScalarField& omega, BiotSavartRoute route) {
  switch (route) {
    case BiotSavartRoute::Periodic:
      return velocity_periodic(omega);
    case BiotSavartRoute::FreeSpace:
      return velocity_free_space(omega);
    case BiotSavartRoute::Auto:
      break;
  }
  const double l1 = lp_norm(omega, 1.0);
  if (l1 == 0.0) return VectorField(omega.grid());
  if (std::abs(omega.integral()) < 1e-8 * l1) return velocity_periodic(omega);
  return velocity_free_space(omega);
}

namespace {

// Integral of |x|^{-s} over the exterior of the square [-a, a]^2, s > 2.
double square_exterior_power_integral(double a, double s) {
  // By symmetry: 8 copies of the wedge 0 <= theta <= pi/4 where the boundary
  // is x = a, i.e. r_b = a / cos(theta).
  constexpr int kNodes = 2000;
  const double dtheta = 0.25 * kPi / kNodes;
  double sum = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    const double theta = (i + 0.5) * dtheta;
    sum += std::pow(a / std::cos(theta), 2.0 - s);
  }
  return 8.0 * sum * dtheta / (s - 2.0);
}

}  // namespace

double hls_ratio(const ScalarField& omega, double p) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError("hls_ratio: p must lie in (1, 2)");
  const double denom = lp_norm(omega, p);
  if (denom == 0.0) throw DomainError("hls_ratio: omega must be nonzero");
  const double q = 2.0 * p / (2.0 - p);
  const VectorField u = velocity_free_space(omega);
  const double h = omega.grid().spacing();
  double sum = 0.0;
  const auto ux = u.x.values();
  const auto uy = u.y.values();
  for (std::size_t i = 0; i < ux.size(); ++i) sum += std::pow(std::hypot(ux[i], uy[i]), q);
  sum *= h * h;
  // Far field: u ~ c x^perp / (2 pi |x|^2) outside the box.
  const double c = omega.integral();
  sum += std::pow(std::abs(c) / (2.0 * kPi), q) * square_exterior_power_integral(0.5 * omega.grid().box_size(), q);
  return std::pow(sum, 1.0 / q) / denom;
}

double weighted_velocity_norm(const ScalarField& omega, double q, double m) {
  if (!(q > 2.0)) throw DomainError("weighted_velocity_norm: q must exceed 2");
  const bool low = m > 0.0 && m < 1.0;
  const bool high = m > 1.0 && m < 2.0;
  if (!low && !high) throw DomainError("weighted_velocity_norm: m must lie in (0,1) or (1,2)");
  const double l1 = lp_norm(omega, 1.0);
  if (high && std::abs(omega.integral()) > 1e-8 * std::max(l1, 1e-300))
    throw DomainError("weighted_velocity_norm: m in (1,2) requires zero circulation");
  if (l1 == 0.0) return 0.0;
  const VectorField u = velocity_free_space(omega);
  const Grid& g = omega.grid();
  const double exponent = 0.5 * (m - 2.0 / q);
  double sum = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    const double y = g.coord(iy);
    for (int ix = 0; ix < g.n(); ++ix) {
      const double x = g.coord(ix);
      const double w = std::pow(1.0 + x * x + y * y, exponent);
      sum += std::pow(w * std::hypot(u.x(ix, iy), u.y(ix, iy)), q);
    }
  }
  return std::pow(sum * g.spacing() * g.spacing(), 1.0 / q);
}

}  // namespace nsm
