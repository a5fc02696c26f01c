#include "nsm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"
#include "nsm/oseen.hpp"

namespace nsm {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

// Running supremum in place.
void running_sup(std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
}

void running_sup(ContractionSeries& s) {
  s.raw_total.clear();
  for (const auto& row : s.parts) s.raw_total.push_back(*std::max_element(row.begin(), row.end()));
  for (std::size_t k = 1; k < s.parts.size(); ++k)
    for (std::size_t c = 0; c < s.parts[k].size(); ++c) s.parts[k][c] = std::max(s.parts[k][c], s.parts[k - 1][c]);
  s.total.clear();
  for (const auto& row : s.parts) s.total.push_back(*std::max_element(row.begin(), row.end()));
  running_sup(s.l1);
}

ScalarField subsample(const ScalarField& f, const Grid& coarse) {
  const Grid& g = f.grid();
  if (g == coarse) return f;
  if (g.box_size() != coarse.box_size() || g.n() % coarse.n() != 0)
    throw MismatchError("solution_distance: grids are not nested");
  const int r = g.n() / coarse.n();
  ScalarField out(coarse);
  for (int iy = 0; iy < coarse.n(); ++iy)
    for (int ix = 0; ix < coarse.n(); ++ix) out(ix, iy) = f(ix * r, iy * r);
  return out;
}

// Row of per-part values for remainder pieces (diffuse, interaction) at time t.
std::vector<double> contraction_row(const ScalarField& diffuse, const ScalarField& interaction, double t,
                                    const std::vector<OseenVortex>& bg, const std::vector<ScalarField>& chi,
                                    double m) {
  std::vector<double> row;
  const ScalarField d0 = diffuse + chi[0] * interaction;
  row.push_back(std::pow(t, 0.25) * lp_norm(d0, 4.0 / 3.0));
  for (std::size_t i = 0; i < bg.size(); ++i) {
    ScalarField part = chi[i + 1] * interaction;
    part *= 1.0 / bg[i].alpha;
    row.push_back(self_similar_weighted_l2(part, bg[i].z, t, m));
  }
  return row;
}

}  // namespace

double oseen_distance(const ScalarField& omega, double t, double alpha, double p) {
  if (p < 1.0) throw DomainError("oseen_distance: p must be >= 1");
  if (!(t > 0.0)) throw DomainError("oseen_distance: t must be positive");
  const OseenVortex v{alpha, {}};
  const Grid& g = omega.grid();
  ScalarField diff = omega;
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) diff(ix, iy) -= v.vorticity({g.coord(ix), g.coord(iy)}, t);
  const double power = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  return std::pow(t, power) * lp_norm(diff, p);
}

bool ContractionSeries::nondecreasing() const {
  for (std::size_t k = 1; k < parts.size(); ++k) {
    for (std::size_t c = 0; c < parts[k].size(); ++c)
      if (parts[k][c] < parts[k - 1][c]) return false;
    if (total[k] < total[k - 1]) return false;
  }
  for (std::size_t k = 1; k < l1.size(); ++k)
    if (l1[k] < l1[k - 1]) return false;
  return true;
}

std::vector<ScalarField> partition_of_unity(const std::vector<OseenVortex>& backgrounds, double separation,
                                            const Grid& grid) {
  std::vector<ScalarField> chi;
  ScalarField rest = ScalarField::sample(grid, [](double, double) { return 1.0; });
  chi.push_back(rest);
  for (const OseenVortex& v : backgrounds) {
    ScalarField c(grid);
    if (!std::isfinite(separation)) {
      c = ScalarField::sample(grid, [](double, double) { return 1.0; });
    } else {
      c = ScalarField::sample(grid, [&](double x, double y) {
        return partition_bump((Point{x, y} - v.z).norm() / separation);
      });
    }
    chi[0] -= c;
    chi.push_back(std::move(c));
  }
  return chi;
}

ScalarField diffuse_part(const SolverRun& run, std::size_t k, const std::vector<ScalarField>& chi) {
  const Snapshot& s = run.snapshots.at(k);
  return s.diffuse + chi[0] * s.interaction;
}

double self_similar_weighted_l2(const ScalarField& f, Point z, double t, double m) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const double v = f(ix, iy);
      if (v == 0.0) continue;
      const double r2 = (Point{g.coord(ix), g.coord(iy)} - z).norm2();
      s += std::pow(1.0 + r2 / t, m) * v * v;
    }
  return std::sqrt(t * s * g.spacing() * g.spacing());
}

ContractionSeries remainder_norms(const SolverRun& run, double m) {
  if (!run.decomposed()) throw ModeError("remainder_norms: run is not in decomposed mode");
  const Grid& g = run.config.grid;
  const auto chi = partition_of_unity(run.backgrounds, run.separation, g);
  ContractionSeries out;
  for (const Snapshot& s : run.snapshots) {
    out.t.push_back(s.t);
    out.parts.push_back(contraction_row(s.diffuse, s.interaction, s.t, run.backgrounds, chi, m));
  }
  running_sup(out);
  return out;
}

ContractionSeries solution_distance(const SolverRun& a, const SolverRun& b, double m) {
  if (!a.decomposed() || !b.decomposed()) throw ModeError("solution_distance: runs must be decomposed");
  if (a.snapshots.size() != b.snapshots.size()) throw MismatchError("solution_distance: snapshot counts differ");
  if (a.backgrounds.size() != b.backgrounds.size()) throw MismatchError("solution_distance: vortex counts differ");
  for (std::size_t i = 0; i < a.backgrounds.size(); ++i)
    if (a.backgrounds[i].z != b.backgrounds[i].z) throw MismatchError("solution_distance: vortex centers differ");
  const Grid& ga = a.config.grid;
  const Grid& gb = b.config.grid;
  if (ga.box_size() != gb.box_size()) throw MismatchError("solution_distance: box sizes differ");
  const Grid coarse = ga.n() <= gb.n() ? ga : gb;
  const auto chi = partition_of_unity(a.backgrounds, a.separation, coarse);

  ContractionSeries out;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const Snapshot& sa = a.snapshots[k];
    const Snapshot& sb = b.snapshots[k];
    if (std::abs(sa.t - sb.t) > 1e-12 * sa.t) throw MismatchError("solution_distance: snapshot times differ");
    const ScalarField dd = subsample(sa.diffuse, coarse) - subsample(sb.diffuse, coarse);
    const ScalarField di = subsample(sa.interaction, coarse) - subsample(sb.interaction, coarse);
    out.t.push_back(sa.t);
    out.parts.push_back(contraction_row(dd, di, sa.t, a.backgrounds, chi, m));
    // Backgrounds coincide only when the atoms do; compare full vorticities.
    const ScalarField wa = subsample(a.vorticity(k), coarse);
    const ScalarField wb = subsample(b.vorticity(k), coarse);
    out.l1.push_back(lp_norm(wa - wb, 1.0));
  }
  running_sup(out);
  return out;
}

std::pair<double, double> localized_norms(const ScalarField& w0, Point z, double t, double p, double q) {
  const Grid& g = w0.grid();
  const ScalarField cutoff =
      ScalarField::sample(g, [&](double x, double y) { return std::exp(-(Point{x, y} - z).norm2() / (8.0 * t)); });
  const double pw = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  const double vorticity = std::pow(t, pw) * lp_norm(w0 * cutoff, p);
  double velocity = 0.0;
  if (w0.max_abs() > 0.0) {
    const VectorField u = velocity_free_space(w0);
    ScalarField speed(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      speed.values()[i] = std::hypot(u.x.values()[i], u.y.values()[i]) * cutoff.values()[i];
    const double qw = std::isinf(q) ? 0.5 : 0.5 - 1.0 / q;
    velocity = std::pow(t, qw) * lp_norm(speed, q);
  }
  return {vorticity, velocity};
}

LocalizedSeries localized_diffuse_norm(const SolverRun& run, std::size_t vortex, double p, double q) {
  if (!run.decomposed()) throw ModeError("localized_diffuse_norm: run is not in decomposed mode");
  if (vortex >= run.backgrounds.size()) throw DomainError("localized_diffuse_norm: no such vortex");
  const auto chi = partition_of_unity(run.backgrounds, run.separation, run.config.grid);
  const Point z = run.backgrounds[vortex].z;
  LocalizedSeries out;
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    const double t = run.snapshots[k].t;
    const auto [w, u] = localized_norms(diffuse_part(run, k, chi), z, t, p, q);
    out.t.push_back(t);
    out.vorticity.push_back(w);
    out.velocity.push_back(u);
  }
  return out;
}

void write_oseen_distance_csv(const std::filesystem::path& path, const std::vector<OseenDistanceRow>& rows) {
  auto out = open_output(path);
  out << "t,p,value\n";
  for (const auto& r : rows) out << format_real(r.t) << ',' << format_real(r.p) << ',' << format_real(r.value) << '\n';
}

void write_contraction_csv(const std::filesystem::path& path, const ContractionSeries& s, const std::string& prefix) {
  auto out = open_output(path);
  out << 't';
  for (std::size_t c = 0; c < s.columns(); ++c) out << ',' << prefix << c;
  out << ',' << prefix;
  if (!s.l1.empty()) out << ",l1";
  out << '\n';
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    out << format_real(s.t[k]);
    for (double v : s.parts[k]) out << ',' << format_real(v);
    out << ',' << format_real(s.total[k]);
    if (!s.l1.empty()) out << ',' << format_real(s.l1[k]);
    out << '\n';
  }
}

void write_gnuplot_script(const std::filesystem::path& path, const std::filesystem::path& csv, const std::string& title,
                          bool log_axes) {
  auto out = open_output(path);
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set title '" << title << "'\n";
  if (log_axes) out << "set logscale xy\n";
  out << "plot for [c=2:*] '" << csv.filename().string() << "' using 1:c with linespoints\n";
}

}  // namespace nsm
