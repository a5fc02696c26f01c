#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsm/geometry.hpp"

namespace nsm {

/// Uniform n x n sampling of the centered periodic box [-L/2, L/2)^2.
///
/// Coordinates are x_j = -L/2 + j*h with h = L/n, so the origin is the grid
/// point j = n/2. Wavenumbers run over {-n/2+1, ..., n/2} * 2*pi/L.
class Grid {
 public:
  Grid(int n, double box_size);

  int n() const { return n_; }
  double box_size() const { return box_; }
  double spacing() const { return box_ / n_; }
  double coord(int j) const { return -0.5 * box_ + j * spacing(); }
  /// Wavenumber of full-length spectral index j in [0, n).
  double wavenumber(int j) const;
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  /// Grid with the same spacing on a box 2x larger in each direction.
  Grid padded() const { return Grid(2 * n_, 2 * box_); }

  bool operator==(const Grid& o) const { return n_ == o.n_ && box_ == o.box_; }

 private:
  int n_;
  double box_;
};

/// Real samples on a Grid. Storage is row-major with rows along y:
/// values[iy * n + ix] is the sample at (coord(ix), coord(iy)).
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid);
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples fn(x, y) at every grid point.
  static ScalarField sample(const Grid& grid, const std::function<double(double, double)>& fn);

  const Grid& grid() const { return grid_; }
  double operator()(int ix, int iy) const { return values_[index(ix, iy)]; }
  double& operator()(int ix, int iy) { return values_[index(ix, iy)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Rectangle-rule integral (spectrally accurate for smooth periodic data).
  double integral() const;
  double max_abs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// Pointwise product.
  ScalarField& operator*=(const ScalarField& o);

 private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * grid_.n() + ix;
  }
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(ScalarField a, double s);
/// Pointwise product.
ScalarField operator*(ScalarField a, const ScalarField& b);

/// Pair of components on one grid.
class VectorField {
 public:
  explicit VectorField(const Grid& grid) : x(grid), y(grid) {}
  VectorField(ScalarField x_component, ScalarField y_component);

  const Grid& grid() const { return x.grid(); }
  VectorField& operator+=(const VectorField& o);
  VectorField& operator*=(double s);
  /// Largest pointwise Euclidean magnitude.
  double max_magnitude() const;

  ScalarField x;
  ScalarField y;
};

/// Half-plane discrete Fourier coefficients of a ScalarField, laid out as
/// n rows (y wavenumber, full) by n/2+1 columns (x wavenumber, halved).
class Spectrum {
 public:
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int rows() const { return grid_.n(); }
  int cols() const { return grid_.n() / 2 + 1; }
  std::complex<double>& at(int row, int col) { return coeffs_[static_cast<std::size_t>(row) * cols() + col]; }
  std::complex<double> at(int row, int col) const { return coeffs_[static_cast<std::size_t>(row) * cols() + col]; }
  std::span<std::complex<double>> coeffs() { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator*=(double s);

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum transform(const ScalarField& f);
ScalarField inverse_transform(const Spectrum& s);

/// Wavenumber tables for a grid. `kx`/`ky` are the plain wavenumbers;
/// `dx`/`dy` are the same with the Nyquist entry zeroed, used for odd
/// derivatives of real data.
struct Wavenumbers {
  explicit Wavenumbers(const Grid& grid);
  std::vector<double> kx, ky, dx, dy;
  /// 2/3-rule mask: true where both index magnitudes are <= n/3.
  std::vector<bool> keep_x, keep_y;
};

/// Zeroes the modes removed by the 2/3 rule.
void dealias(Spectrum& s);

VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// Scalar curl d1 v2 - d2 v1.
ScalarField curl(const VectorField& v);
/// Exact heat flow e^{t Delta} on the periodic box.
ScalarField heat_flow(const ScalarField& f, double t);

/// Rectangle-rule L^p norm, p in [1, inf]; p = inf gives the grid max.
double lp_norm(const ScalarField& f, double p);
/// || (1+|x - center|^2)^{m/2} f ||_{L^q}, weight on unwrapped coordinates.
double weighted_norm(const ScalarField& f, double q, double m, Point center = {});

/// f - (integral of f) * G, with G the unit Gaussian sampled on f's grid.
ScalarField project_mean_zero(const ScalarField& f);

/// Evaluates the trigonometric interpolant of `f` at the tensor points
/// origin + scale * (target grid coordinates). Points outside the source box
/// are assigned zero.
ScalarField resample(const ScalarField& f, const Grid& target, Point origin, double scale);

/// Largest |f| on the outermost ring of grid cells divided by max |f|
/// (0 for the zero field).
double boundary_ratio(const ScalarField& f);

/// Throws MarginError when boundary_ratio(f) exceeds `tolerance`.
void require_boundary_decay(const ScalarField& f, double tolerance, const std::string& what);

}  // namespace nsm
