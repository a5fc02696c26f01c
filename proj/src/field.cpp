#include "nsm/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"
#include "nsm/fft.hpp"
#include "nsm/oseen.hpp"

namespace nsm {

Grid::Grid(int n, double box_size) : n_(n), box_(box_size) {
  if (n < 16 || n % 2 != 0) throw DomainError("Grid: n must be even and >= 16");
  if (!(box_size > 0.0) || !std::isfinite(box_size)) throw DomainError("Grid: box size must be positive");
}

double Grid::wavenumber(int j) const {
  const int k = j <= n_ / 2 ? j : j - n_;
  return 2.0 * std::numbers::pi * k / box_;
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("ScalarField: size mismatch");
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double)>& fn) {
  ScalarField f(grid);
  const int n = grid.n();
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (int ix = 0; ix < n; ++ix) f(ix, iy) = fn(grid.coord(ix), y);
  }
  return f;
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  const double h = grid_.spacing();
  return s * h * h;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }

VectorField::VectorField(ScalarField x_component, ScalarField y_component)
    : x(std::move(x_component)), y(std::move(y_component)) {
  if (!(x.grid() == y.grid())) throw std::invalid_argument("VectorField: components on different grids");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  x += o.x;
  y += o.y;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

double VectorField::max_magnitude() const {
  double m = 0.0;
  const auto vx = x.values();
  const auto vy = y.values();
  for (std::size_t i = 0; i < vx.size(); ++i) m = std::max(m, std::hypot(vx[i], vy[i]));
  return m;
}

// ---------------------------------------------------------------------------

Spectrum::Spectrum(const Grid& grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.n()) * (grid.n() / 2 + 1)) {}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Spectrum transform(const ScalarField& f) {
  Spectrum s(f.grid());
  RealFft2d::for_size(f.grid().n()).forward(f.values(), s.coeffs());
  return s;
}

ScalarField inverse_transform(const Spectrum& s) {
  ScalarField f(s.grid());
  RealFft2d::for_size(s.grid().n()).inverse(s.coeffs(), f.values());
  return f;
}

Wavenumbers::Wavenumbers(const Grid& grid) {
  const int n = grid.n();
  const int half = n / 2 + 1;
  kx.resize(half);
  dx.resize(half);
  keep_x.resize(half);
  for (int i = 0; i < half; ++i) {
    kx[i] = grid.wavenumber(i);
    dx[i] = (i == n / 2) ? 0.0 : kx[i];
    keep_x[i] = 3 * i <= n;
  }
  ky.resize(n);
  dy.resize(n);
  keep_y.resize(n);
  for (int j = 0; j < n; ++j) {
    ky[j] = grid.wavenumber(j);
    dy[j] = (j == n / 2) ? 0.0 : ky[j];
    const int idx = j <= n / 2 ? j : n - j;
    keep_y[j] = 3 * idx <= n;
  }
}

void dealias(Spectrum& s) {
  const Wavenumbers k(s.grid());
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c)
      if (!(k.keep_y[r] && k.keep_x[c])) s.at(r, c) = 0.0;
}

namespace {

constexpr std::complex<double> I{0.0, 1.0};

template <typename Fn>
Spectrum map_spectrum(const Spectrum& in, Fn&& fn) {
  const Wavenumbers k(in.grid());
  Spectrum out(in.grid());
  for (int r = 0; r < in.rows(); ++r)
    for (int c = 0; c < in.cols(); ++c) out.at(r, c) = fn(k, r, c, in.at(r, c));
  return out;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Spectrum s = transform(f);
  auto gx = map_spectrum(s, [](const Wavenumbers& k, int, int c, std::complex<double> v) { return I * k.dx[c] * v; });
  auto gy = map_spectrum(s, [](const Wavenumbers& k, int r, int, std::complex<double> v) { return I * k.dy[r] * v; });
  return VectorField(inverse_transform(gx), inverse_transform(gy));
}

ScalarField laplacian(const ScalarField& f) {
  auto s = map_spectrum(transform(f), [](const Wavenumbers& k, int r, int c, std::complex<double> v) {
    return -(k.kx[c] * k.kx[c] + k.ky[r] * k.ky[r]) * v;
  });
  return inverse_transform(s);
}

ScalarField divergence(const VectorField& v) {
  const Spectrum sx = transform(v.x);
  const Spectrum sy = transform(v.y);
  const Wavenumbers k(v.grid());
  Spectrum out(v.grid());
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out.at(r, c) = I * (k.dx[c] * sx.at(r, c) + k.dy[r] * sy.at(r, c));
  return inverse_transform(out);
}

ScalarField curl(const VectorField& v) {
  const Spectrum sx = transform(v.x);
  const Spectrum sy = transform(v.y);
  const Wavenumbers k(v.grid());
  Spectrum out(v.grid());
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out.at(r, c) = I * (k.dx[c] * sy.at(r, c) - k.dy[r] * sx.at(r, c));
  return inverse_transform(out);
}

ScalarField heat_flow(const ScalarField& f, double t) {
  if (t < 0.0) throw DomainError("heat_flow: negative time");
  auto s = map_spectrum(transform(f), [t](const Wavenumbers& k, int r, int c, std::complex<double> v) {
    return std::exp(-(k.kx[c] * k.kx[c] + k.ky[r] * k.ky[r]) * t) * v;
  });
  return inverse_transform(s);
}

// ---------------------------------------------------------------------------

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  const double h = f.grid().spacing();
  double s = 0.0;
  if (p == 1.0) {
    for (double v : f.values()) s += std::abs(v);
    return s * h * h;
  }
  if (p == 2.0) {
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * h * h);
  }
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * h * h, 1.0 / p);
}

double weighted_norm(const ScalarField& f, double q, double m, Point center) {
  if (!(q >= 1.0)) throw DomainError("weighted_norm: q must be >= 1");
  if (!(m >= 0.0)) throw DomainError("weighted_norm: m must be >= 0");
  if (m == 0.0) return lp_norm(f, q);
  const Grid& g = f.grid();
  ScalarField weighted(g);
  for (int iy = 0; iy < g.n(); ++iy) {
    const double dy = g.coord(iy) - center.y;
    for (int ix = 0; ix < g.n(); ++ix) {
      const double dx = g.coord(ix) - center.x;
      weighted(ix, iy) = std::pow(1.0 + dx * dx + dy * dy, 0.5 * m) * f(ix, iy);
    }
  }
  return lp_norm(weighted, q);
}

ScalarField project_mean_zero(const ScalarField& f) {
  const double mass = f.integral();
  ScalarField out = f;
  if (mass == 0.0) return out;
  const Grid& g = f.grid();
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) out(ix, iy) -= mass * gaussian_profile({g.coord(ix), g.coord(iy)});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Periodic Lagrange basis of the even-n trigonometric interpolant (Nyquist
// mode carried as a cosine): D(y) = sin(n u) / (n tan u), u = pi y / L.
double dirichlet_weight(double y, int n, double box) {
  const double u = std::numbers::pi * y / box;
  const double su = std::sin(u);
  if (std::abs(su) < 1e-13) return std::cos(n * u);
  return std::sin(n * u) * std::cos(u) / (n * su);
}

// Rows: target coordinates; columns: source samples.
RowMatrix interpolation_matrix(const Grid& source, const Grid& target, double origin, double scale) {
  const int ns = source.n();
  const int nt = target.n();
  const double half = 0.5 * source.box_size();
  const double slack = 1e-12 * source.box_size();
  RowMatrix w = RowMatrix::Zero(nt, ns);
  for (int a = 0; a < nt; ++a) {
    const double x = origin + scale * target.coord(a);
    if (x < -half - slack || x > half + slack) continue;
    for (int j = 0; j < ns; ++j) w(a, j) = dirichlet_weight(x - source.coord(j), ns, source.box_size());
  }
  return w;
}

}  // namespace

ScalarField resample(const ScalarField& f, const Grid& target, Point origin, double scale) {
  const Grid& src = f.grid();
  const RowMatrix wx = interpolation_matrix(src, target, origin.x, scale);
  const RowMatrix wy = interpolation_matrix(src, target, origin.y, scale);
  Eigen::Map<const RowMatrix> values(f.values().data(), src.n(), src.n());
  RowMatrix out = wy * values * wx.transpose();
  ScalarField result(target);
  std::copy(out.data(), out.data() + out.size(), result.values().begin());
  return result;
}

double boundary_ratio(const ScalarField& f) {
  const double peak = f.max_abs();
  if (peak == 0.0) return 0.0;
  const int n = f.grid().n();
  double edge = 0.0;
  for (int j = 0; j < n; ++j) {
    edge = std::max({edge, std::abs(f(0, j)), std::abs(f(n - 1, j)), std::abs(f(j, 0)), std::abs(f(j, n - 1))});
  }
  return edge / peak;
}

void require_boundary_decay(const ScalarField& f, double tolerance, const std::string& what) {
  const double r = boundary_ratio(f);
  if (r > tolerance) {
    throw MarginError(what + ": field not decayed at box boundary (ratio " + format_real(r) + " > " +
                      format_real(tolerance) + ")");
  }
}

}  // namespace nsm
