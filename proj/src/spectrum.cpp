#include "nsm/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"
#include "nsm/field.hpp"
#include "nsm/field_io.hpp"
#include "nsm/oseen.hpp"

namespace nsm {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Quadrature grid in xi. Hermite products up to degree 62 per direction are
// below 1e-24 of their peak at |xi| = 25.
const Grid& quadrature_grid() {
  static const Grid g(320, 50.0);
  return g;
}

// Columns j of A are the 1D functions a_j = d^j g / sqrt(j!/2^j) and of P the
// duals p_j = a_j / g, g(x) = exp(-x^2/4)/sqrt(4 pi); int p_j a_k = delta_jk.
struct HermiteTables {
  Eigen::MatrixXd a, p;
};

HermiteTables hermite_tables(const Grid& g, int count) {
  const int n = g.n();
  HermiteTables t{Eigen::MatrixXd(n, count), Eigen::MatrixXd(n, count)};
  for (int i = 0; i < n; ++i) {
    const double x = g.coord(i);
    const double y = x / std::sqrt(2.0);
    const double base = std::exp(-0.25 * x * x) / std::sqrt(4.0 * std::numbers::pi);
    // Normalized probabilists' Hermite polynomials h_j = He_j / sqrt(j!).
    double prev = 0.0, cur = 1.0;
    for (int j = 0; j < count; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      t.p(i, j) = sign * cur;
      t.a(i, j) = sign * cur * base;
      const double next = (y * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(j + 1.0);
      prev = cur;
      cur = next;
    }
  }
  return t;
}

ScalarField outer(const Grid& g, const Eigen::VectorXd& fx, const Eigen::VectorXd& fy) {
  ScalarField f(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) f(ix, iy) = fx(ix) * fy(iy);
  return f;
}

// B(a, b) = <phi_a, v^G . grad phi_b + v^{phi_b} . grad G>, index j * basis + k.
const Eigen::MatrixXd& coupling_matrix(int basis) {
  thread_local std::map<int, Eigen::MatrixXd> cache;
  if (auto it = cache.find(basis); it != cache.end()) return it->second;

  const Grid& g = quadrature_grid();
  const int n = g.n();
  const double area = g.spacing() * g.spacing();
  const HermiteTables t = hermite_tables(g, basis + 1);

  VectorField vg(g), gg(g);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Point xi{g.coord(ix), g.coord(iy)};
      const Vec2 v = velocity_profile(xi);
      const Vec2 d = gaussian_gradient(xi);
      vg.x(ix, iy) = v.x;
      vg.y(ix, iy) = v.y;
      gg.x(ix, iy) = d.x;
      gg.y(ix, iy) = d.y;
    }

  const int size = basis * basis;
  Eigen::MatrixXd B(size, size);
  const Eigen::MatrixXd P = t.p.leftCols(basis);
  for (int j = 0; j < basis; ++j) {
    const double dj = std::sqrt((j + 1) / 2.0);
    for (int k = 0; k < basis; ++k) {
      const double dk = std::sqrt((k + 1) / 2.0);
      const ScalarField phi = outer(g, t.a.col(j), t.a.col(k));
      const ScalarField phi_x = outer(g, t.a.col(j + 1) * dj, t.a.col(k));
      const ScalarField phi_y = outer(g, t.a.col(j), t.a.col(k + 1) * dk);
      const VectorField v = velocity_free_space(phi);
      const ScalarField F = vg.x * phi_x + vg.y * phi_y + v.x * gg.x + v.y * gg.y;
      Eigen::Map<const RowMatrix> Fm(F.values().data(), n, n);
      // C(k', j') = sum_{iy, ix} p_k'(y) F(iy, ix) p_j'(x).
      const Eigen::MatrixXd C = P.transpose() * Fm * P;
      for (int jp = 0; jp < basis; ++jp)
        for (int kp = 0; kp < basis; ++kp) B(jp * basis + kp, j * basis + k) = area * C(kp, jp);
    }
  }
  return cache.emplace(basis, std::move(B)).first->second;
}

}  // namespace

double SpectrumReport::max_real() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : eigenvalues) m = std::max(m, e.real());
  return m;
}

SpectrumReport linearized_spectrum(double alpha, int basis_n, bool mean_zero) {
  if (basis_n < 16) throw DomainError("linearized_spectrum: basis_n must be >= 16");
  const Eigen::MatrixXd& B = coupling_matrix(basis_n);

  std::vector<int> index;
  for (int j = 0; j < basis_n; ++j)
    for (int k = 0; k < basis_n; ++k)
      if (!(mean_zero && j == 0 && k == 0)) index.push_back(j * basis_n + k);
  const int size = static_cast<int>(index.size());

  Eigen::MatrixXd A(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) A(r, c) = -alpha * B(index[r], index[c]);
  for (int r = 0; r < size; ++r) {
    const int j = index[r] / basis_n, k = index[r] % basis_n;
    A(r, r) += -0.5 * (j + k);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, true);
  if (solver.info() != Eigen::Success) throw ConvergenceError("linearized_spectrum: eigenvalue iteration failed");
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  std::vector<int> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  });

  SpectrumReport rep;
  rep.alpha = alpha;
  rep.basis_n = basis_n;
  rep.mean_zero = mean_zero;
  for (int i : order) rep.eigenvalues.push_back(values(i));
  rep.labels.assign(size, "");

  auto nearest = [&](double target) {
    int best = 0;
    for (int i = 1; i < size; ++i)
      if (std::abs(rep.eigenvalues[i] - target) < std::abs(rep.eigenvalues[best] - target)) best = i;
    return best;
  };
  const int tr = nearest(-0.5);
  rep.translation = rep.eigenvalues[tr];
  for (const auto& e : rep.eigenvalues)
    if (std::abs(e - rep.translation) < 1e-6) ++rep.translation_multiplicity;

  // Rows of phi_10 and phi_01 in the reduced index.
  int r10 = -1, r01 = -1;
  for (int r = 0; r < size; ++r) {
    if (index[r] == basis_n) r10 = r;
    if (index[r] == 1) r01 = r;
  }
  const auto vec = vectors.col(order[tr]);
  const double in_span = std::sqrt(std::norm(vec(r10)) + std::norm(vec(r01)));
  rep.translation_correlation = in_span / vec.norm();
  if (rep.translation_correlation > 0.99)
    for (int i = 0; i < size; ++i)
      if (std::abs(rep.eigenvalues[i] - rep.translation) < 1e-6) rep.labels[i] = "translation";

  const int sc = nearest(-1.0);
  rep.scaling = rep.eigenvalues[sc];
  if (rep.labels[sc].empty()) rep.labels[sc] = "scaling";
  return rep;
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumReport>& reports) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "alpha,re,im,label\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      out << format_real(r.alpha) << ',' << format_real(r.eigenvalues[i].real()) << ','
          << format_real(r.eigenvalues[i].imag()) << ',' << r.labels[i] << '\n';
}

}  // namespace nsm
