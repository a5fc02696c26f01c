#include "nsm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"

namespace nsm {

FiniteMeasure::FiniteMeasure(std::vector<Atom> atoms, std::optional<ScalarField> density)
    : density_(std::move(density)) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.mass) || !std::isfinite(a.position.x) || !std::isfinite(a.position.y))
      throw DomainError("FiniteMeasure: non-finite atom");
    if (a.mass != 0.0) atoms_.push_back(a);
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
    const double ma = std::abs(a.mass), mb = std::abs(b.mass);
    if (ma != mb) return ma > mb;
    return a.position < b.position;
  });
  auto by_position = atoms_;
  std::sort(by_position.begin(), by_position.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  for (std::size_t i = 1; i < by_position.size(); ++i)
    if (by_position[i].position == by_position[i - 1].position)
      throw DomainError("FiniteMeasure: atom positions must be pairwise distinct");
}

double FiniteMeasure::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  if (density_) s += density_->integral();
  return s;
}

double atomic_norm(const FiniteMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += std::abs(a.mass);
  return s;
}

double total_variation(const FiniteMeasure& mu) {
  return atomic_norm(mu) + (mu.density() ? lp_norm(*mu.density(), 1.0) : 0.0);
}

AtomicDecomposition decompose(const FiniteMeasure& mu, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("decompose: epsilon must be positive");
  const auto& atoms = mu.atoms();
  // tail[k] = atomic mass of atoms k, k+1, ...
  std::vector<double> tail(atoms.size() + 1, 0.0);
  for (std::size_t k = atoms.size(); k-- > 0;) tail[k] = tail[k + 1] + std::abs(atoms[k].mass);
  std::size_t keep = 0;
  while (keep < atoms.size() && tail[keep] > epsilon) ++keep;

  AtomicDecomposition d;
  d.epsilon = epsilon;
  d.retained.assign(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(keep));
  d.remainder = FiniteMeasure(std::vector<Atom>(atoms.begin() + static_cast<std::ptrdiff_t>(keep), atoms.end()),
                              mu.density());
  for (const Atom& a : d.retained) d.atomic_mass += std::abs(a.mass);
  d.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.retained.size(); ++i)
    for (std::size_t j = i + 1; j < d.retained.size(); ++j)
      d.min_separation = std::min(d.min_separation, (d.retained[i].position - d.retained[j].position).norm());
  return d;
}

ScalarField heat_smooth(const FiniteMeasure& mu, double t, const Grid& grid) {
  if (!(t > 0.0)) throw DomainError("heat_smooth: t must be positive");
  const double half = 0.5 * grid.box_size();
  const double margin = 6.0 * std::sqrt(t);
  for (const Atom& a : mu.atoms()) {
    if (std::abs(a.position.x) > half - margin || std::abs(a.position.y) > half - margin)
      throw MarginError("heat_smooth: atom within 6 sqrt(t) of the box boundary");
  }
  ScalarField out(grid);
  if (mu.density()) {
    const ScalarField& rho = *mu.density();
    out = heat_flow(rho.grid() == grid ? rho : resample(rho, grid, {}, 1.0), t);
  }
  const double norm = 1.0 / (4.0 * std::numbers::pi * t);
  for (const Atom& a : mu.atoms()) {
    for (int iy = 0; iy < grid.n(); ++iy) {
      const double dy = grid.coord(iy) - a.position.y;
      for (int ix = 0; ix < grid.n(); ++ix) {
        const double dx = grid.coord(ix) - a.position.x;
        out(ix, iy) += a.mass * norm * std::exp(-(dx * dx + dy * dy) / (4.0 * t));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

FiniteMeasure read_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measure file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("measure v1", 0) != 0)
    throw ConfigError("measure file must start with 'measure v1': " + path.string());
  std::vector<Atom> atoms;
  std::optional<ScalarField> density;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "atom") {
      Atom a;
      if (!(ls >> a.position.x >> a.position.y >> a.mass))
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 'atom <x> <y> <mass>'");
      atoms.push_back(a);
    } else if (kind == "density") {
      std::string file;
      if (!(ls >> file)) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": missing density path");
      std::filesystem::path p(file);
      if (p.is_relative()) p = path.parent_path() / p;
      density = read_field(p);
    } else {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": unknown record '" + kind + "'");
    }
  }
  return FiniteMeasure(std::move(atoms), std::move(density));
}

void write_measure(const std::filesystem::path& path, const FiniteMeasure& mu,
                   const std::filesystem::path& density_file) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string());
  out << "measure v1\n";
  for (const Atom& a : mu.atoms())
    out << "atom " << format_real(a.position.x) << ' ' << format_real(a.position.y) << ' ' << format_real(a.mass)
        << '\n';
  if (mu.density()) {
    std::filesystem::path rel = density_file.empty() ? std::filesystem::path(path.stem().string() + "_density.fld")
                                                     : density_file;
    write_field(path.parent_path() / rel, *mu.density());
    out << "density " << rel.string() << '\n';
  }
}

}  // namespace nsm
