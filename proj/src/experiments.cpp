#include "nsm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "nsm/biot_savart.hpp"
#include "nsm/diagnostics.hpp"
#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"
#include "nsm/measure.hpp"
#include "nsm/oseen.hpp"
#include "nsm/propagators.hpp"
#include "nsm/random_field.hpp"
#include "nsm/selfsim.hpp"
#include "nsm/solver.hpp"
#include "nsm/spectrum.hpp"

namespace nsm {
namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Check less(const std::string& id, const std::string& label, double measured, double bound) {
  return {id, label, measured < bound, measured, "< " + num(bound)};
}

Check at_most(const std::string& id, const std::string& label, double measured, double bound) {
  return {id, label, measured <= bound, measured, "<= " + num(bound)};
}

Check at_least(const std::string& id, const std::string& label, double measured, double bound) {
  return {id, label, measured >= bound, measured, ">= " + num(bound)};
}

Check within(const std::string& id, const std::string& label, double measured, double lo, double hi) {
  return {id, label, measured >= lo && measured <= hi, measured, "in [" + num(lo) + ", " + num(hi) + "]"};
}

Check holds(const std::string& id, const std::string& label, bool ok) {
  return {id, label, ok, ok ? 1.0 : 0.0, "== 1"};
}

void write_manifest(const ExperimentOptions& o, const std::string& name, const Params& params) {
  if (!o.out) return;
  std::filesystem::create_directories(*o.out);
  std::ofstream m(*o.out / "manifest.txt");
  if (!m) throw ConfigError("cannot write manifest in " + o.out->string());
  m << "experiment = " << name << '\n' << "seed = " << o.seed << '\n';
  for (const auto& [k, v] : params) m << k << " = " << v << '\n';
}

std::filesystem::path out_path(const ExperimentOptions& o, const std::string& file) { return *o.out / file; }

std::string alpha_tag(double a) { return "alpha_" + format_real(a); }

ScalarField sample_gaussian(const Grid& g) {
  return ScalarField::sample(g, [](double x, double y) { return gaussian_profile({x, y}); });
}

ScalarField sample_d1_gaussian(const Grid& g) {
  return ScalarField::sample(g, [](double x, double y) { return gaussian_gradient({x, y}).x; });
}

ScalarField gaussian_blob(const Grid& g, Point c, double mass, double sigma) {
  const double norm = mass / (2.0 * std::numbers::pi * sigma * sigma);
  return ScalarField::sample(
      g, [&](double x, double y) { return norm * std::exp(-(Point{x, y} - c).norm2() / (2.0 * sigma * sigma)); });
}

double rel_l2(const ScalarField& a, const ScalarField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

std::vector<double> alpha_list(const ExperimentOptions& o, std::vector<double> defaults) {
  return o.alpha ? std::vector<double>{*o.alpha} : defaults;
}

// ---------------------------------------------------------------------------

std::vector<Check> oseen_exact(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(256), o.box_l.value_or(40.0));
  const double t0 = o.t0.value_or(1e-2);
  const double t_end = o.t_end.value_or(1.0);
  const double dt = o.dt.value_or(1e-3);
  const auto alphas = alpha_list(o, {1.0, 10.0});
  write_manifest(o, "oseen-exact",
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"t0", num(t0)},
                  {"t_end", num(t_end)}, {"dt_direct", num(dt)}, {"epsilon", num(o.epsilon.value_or(0.05))}});
  std::vector<Check> checks;
  std::vector<OseenDistanceRow> rows;

  for (double alpha : alphas) {
    const FiniteMeasure mu({{{0.0, 0.0}, alpha}});
    SolverConfig cfg;
    cfg.grid = grid;
    cfg.t0 = t0;
    cfg.t_end = t_end;
    const SolverRun run = solve_cauchy(mu, o.epsilon.value_or(0.05) * total_variation(mu), cfg);
    double rem = 0.0, err = 0.0;
    const OseenVortex v{alpha, {}};
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
      const Snapshot& s = run.snapshots[k];
      rem = std::max(rem, lp_norm(s.diffuse + s.interaction, 1.0));
      const ScalarField exact = oseen_fields(v, s.t, grid).first;
      const ScalarField omega = run.vorticity(k);
      err = std::max(err, lp_norm(omega - exact, 1.0) / lp_norm(exact, 1.0));
      for (double p : {1.0, 2.0}) rows.push_back({s.t, p, oseen_distance(omega, s.t, alpha, p)});
    }
    checks.push_back(less("A1", "remainder L1, alpha=" + num(alpha), rem, 1e-6));
    checks.push_back(less("A1", "relative L1 error vs Oseen, alpha=" + num(alpha), err, 1e-6));
  }
  checks.push_back(less("A1", "oseen_residual alpha=1 t=1", oseen_residual({1.0, {}}, 1.0, grid), 1e-8));

  // Direct pseudo-spectral solver from G at t = 1 to t = 2.
  SolverConfig direct;
  direct.grid = grid;
  direct.t0 = 1.0;
  direct.t_end = 2.0;
  direct.mode = SolverMode::Direct;
  direct.dt_max = dt;
  const SolverRun run = solve_cauchy(FiniteMeasure({{{0.0, 0.0}, 1.0}}), 0.05, direct);
  const ScalarField exact = oseen_fields({1.0, {}}, 2.0, grid).first;
  const Snapshot& last = run.snapshots.back();
  checks.push_back(less("A2", "direct relative L1 error at t=2", lp_norm(last.diffuse - exact, 1.0) / lp_norm(exact, 1.0),
                        1e-5));
  const double c0 = run.snapshots.front().circulation;
  double drift = 0.0;
  for (const Snapshot& s : run.snapshots) drift = std::max(drift, std::abs(s.circulation - c0) / std::abs(c0));
  checks.push_back(less("A2", "direct circulation drift", drift, 1e-12));

  if (o.out) {
    write_oseen_distance_csv(out_path(o, "oseen_distance.csv"), rows);
    write_gnuplot_script(out_path(o, "oseen_distance.gp"), "oseen_distance.csv", "Oseen distance", true);
  }
  return checks;
}

std::vector<Check> asym_decay(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(128), o.box_l.value_or(20.0));
  const double dt = o.dt.value_or(5e-3);
  const double t_end = o.t_end.value_or(100.0);
  const double tau_end = std::log(t_end);
  write_manifest(o, "asym-decay",
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"dtau", num(dt)},
                  {"t_end", num(t_end)}, {"initial", "G + 0.3 d1G"}});
  const ScalarField G = sample_gaussian(grid);
  const ScalarField w0 = G + 0.3 * sample_d1_gaussian(grid);
  const Trajectory traj = evolve_self_similar(w0, tau_end, StepperConfig::fixed(dt, 0.1));

  std::vector<Check> checks;
  std::vector<OseenDistanceRow> rows;
  for (double p : {1.0, 2.0}) {
    std::vector<double> taus, dist;
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double tau = traj.times[k];
      // t^{1-1/p} ||omega - G_t||_p = ||w - G||_p in self-similar variables.
      const double d = lp_norm(traj.states[k] - G, p);
      rows.push_back({std::exp(tau), p, d});
      if (tau >= std::log(5.0) - 1e-9) {
        if (d > prev) monotone = false;
        prev = d;
      }
      if (tau >= 2.0 - 1e-9 && tau <= std::min(4.6, tau_end) + 1e-9) {
        taus.push_back(tau);
        dist.push_back(d);
      }
    }
    checks.push_back(holds("A3", "distance decreasing after t=5, p=" + num(p), monotone));
    checks.push_back(within("A3", "log-slope over tau in [2, 4.6], p=" + num(p), fit_decay(taus, dist).rate, -0.65,
                            -0.35));
  }
  if (o.out) {
    write_oseen_distance_csv(out_path(o, "oseen_distance.csv"), rows);
    write_gnuplot_script(out_path(o, "oseen_distance.gp"), "oseen_distance.csv", "Distance to Oseen", true);
    traj.dump(*o.out / "trajectory");
  }
  return checks;
}

std::vector<Check> semigroup_kernel(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(128), o.box_l.value_or(24.0));
  const double m = o.m.value_or(3.0);
  write_manifest(o, "semigroup-kernel",
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"m", num(m)}});
  std::vector<Check> checks;
  const ScalarField d1 = sample_d1_gaussian(grid);
  const ScalarField rnd = random_band_limited(grid, o.seed);
  for (double tau : {0.5, 1.0, 2.0})
    checks.push_back(less("A4", "S(tau) d1G vs e^{-tau/2} d1G, tau=" + num(tau),
                          rel_l2(semigroup_apply(tau, d1), std::exp(-0.5 * tau) * d1), 1e-6));
  for (const auto& [name, f] : {std::pair<std::string, const ScalarField&>{"d1G", d1}, {"seeded", rnd}})
    for (auto [t1, t2] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}}) {
      const ScalarField once = semigroup_apply(t1 + t2, f);
      const ScalarField twice = semigroup_apply(t1, semigroup_apply(t2, f));
      checks.push_back(less("A4", "semigroup law " + name + " (" + num(t1) + "+" + num(t2) + ")", rel_l2(twice, once),
                            1e-6));
    }

  const ScalarField w = project_mean_zero(rnd);
  std::vector<double> taus, norms;
  for (int k = 0; k <= 8; ++k) {
    const double tau = 1.0 + 0.25 * k;
    taus.push_back(tau);
    norms.push_back(weighted_norm(semigroup_apply(tau, w), 2.0, m));
  }
  checks.push_back(at_most("A6", "S(tau) mean-zero L2(m) rate over tau in [1, 3]", fit_decay(taus, norms).rate, -0.45));
  if (o.out) {
    std::ofstream csv(out_path(o, "decay.csv"));
    csv << "tau,norm\n";
    for (std::size_t i = 0; i < taus.size(); ++i) csv << format_real(taus[i]) << ',' << format_real(norms[i]) << '\n';
  }
  return checks;
}

std::vector<Check> commutation(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(128), o.box_l.value_or(24.0));
  write_manifest(o, "commutation", {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}});
  std::vector<Check> checks;
  const ScalarField G = sample_gaussian(grid);
  const ScalarField rnd = random_band_limited(grid, o.seed);
  for (const auto& [name, f] : {std::pair<std::string, const ScalarField&>{"G", G}, {"seeded", rnd}})
    for (double tau : {0.5, 1.0}) {
      const VectorField g = gradient(semigroup_apply(tau, f));
      const double scale = std::max(g.x.max_abs(), g.y.max_abs());
      checks.push_back(less("A5", "relative commutation residual " + name + ", tau=" + num(tau),
                            commutation_residual(tau, f) / scale, 1e-6));
    }
  return checks;
}

template <class Evolve>
std::vector<Check> linear_decay(const ExperimentOptions& o, const std::string& name, const std::string& id,
                                double bound, bool translation_check, Evolve evolve) {
  const Grid grid(o.grid_n.value_or(128), o.box_l.value_or(24.0));
  const double dt = o.dt.value_or(2e-3);
  const double m = o.m.value_or(3.0);
  const auto alphas = alpha_list(o, {1.0, 10.0});
  write_manifest(o, name,
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"dtau", num(dt)},
                  {"m", num(m)}});
  std::vector<Check> checks;
  const ScalarField w0 = project_mean_zero(random_band_limited(grid, o.seed));
  const ScalarField d1 = sample_d1_gaussian(grid);
  for (double alpha : alphas) {
    const Trajectory traj = evolve(alpha, w0, 3.0, StepperConfig::fixed(dt, 0.1));
    checks.push_back(at_most(id, "L2(m) decay rate over tau in [1, 3], alpha=" + num(alpha),
                             fit_decay(traj, {2.0, m}, 1.0, 3.0).rate, bound));
    if (translation_check) {
      const Trajectory tr = evolve(alpha, d1, 1.0, StepperConfig::fixed(dt, 1.0));
      checks.push_back(less(id, "d1G vs e^{-tau/2} d1G at tau=1, alpha=" + num(alpha),
                            rel_l2(tr.states.back(), std::exp(-0.5) * d1), 1e-5));
    }
    if (o.out) traj.dump(*o.out / alpha_tag(alpha));
  }
  return checks;
}

std::vector<Check> t_alpha_decay(const ExperimentOptions& o) {
  return linear_decay(o, "t-alpha-decay", "A7", -0.45, true, evolve_T_alpha);
}

std::vector<Check> s1_decay(const ExperimentOptions& o) {
  return linear_decay(o, "s1-decay", "A8", -0.40, false, evolve_S1);
}

std::vector<Check> spectrum(const ExperimentOptions& o) {
  const int basis = o.basis.value_or(32);
  std::vector<double> alphas{0.0, 1.0, 10.0, 100.0};
  if (o.alpha) alphas = {0.0, *o.alpha};
  write_manifest(o, "spectrum", {{"basis", std::to_string(basis)}, {"mean_zero", "1"}});
  std::vector<Check> checks;
  std::vector<SpectrumReport> reports;
  for (double alpha : alphas) reports.push_back(linearized_spectrum(alpha, basis, true));

  std::vector<double> exact;
  for (int j = 0; j < basis; ++j)
    for (int k = 0; k < basis; ++k)
      if (j + k > 0) exact.push_back(-0.5 * (j + k));
  std::sort(exact.rbegin(), exact.rend());
  double err = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) err = std::max(err, std::abs(reports[0].eigenvalues[i] - exact[i]));
  checks.push_back(less("A9", "alpha=0 eigenvalues vs {-n/2}", err, 1e-8));

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const SpectrumReport& r : reports) {
    lo = std::min(lo, r.translation.real());
    hi = std::max(hi, r.translation.real());
    checks.push_back(at_most("A9", "max real part, alpha=" + num(r.alpha), r.max_real(), -0.5 + 1e-3));
    if (r.alpha == 0.0) continue;
    checks.push_back(less("A9", "|translation eigenvalue + 1/2|, alpha=" + num(r.alpha),
                          std::abs(r.translation + 0.5), 1e-6));
    checks.push_back(at_least("A9", "translation multiplicity, alpha=" + num(r.alpha), r.translation_multiplicity, 2));
  }
  checks.push_back(less("A9", "translation eigenvalue spread across alpha", hi - lo, 1e-6));
  if (o.out) {
    write_spectrum_csv(out_path(o, "spectrum.csv"), reports);
    std::ofstream gp(out_path(o, "spectrum.gp"));
    gp << "set datafile separator ','\nset xlabel 'Re'\nset ylabel 'Im'\n"
       << "plot 'spectrum.csv' skip 1 using 2:3 with points title 'eigenvalues'\n";
  }
  return checks;
}

std::vector<Check> sn_gaussian_bound(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(256), o.box_l.value_or(20.0));
  const double dt = o.dt.value_or(1e-3);
  const double alpha = o.alpha.value_or(1.0);
  const double s = o.t0.value_or(0.5);
  const Point y{1.0, 0.0};
  const double h = grid.spacing();
  const double mollify = 2.0 * h * h;
  write_manifest(o, "sn-gaussian-bound",
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"dt", num(dt)},
                  {"alpha", num(alpha)}, {"s", num(s)}, {"y", "1 0"}, {"mollifier_time", num(mollify)}});
  const ScalarField f = heat_smooth(FiniteMeasure({{y, 1.0}}), mollify, grid);
  const std::vector<OseenVortex> vortices{{alpha, {}}};
  std::vector<Check> checks;
  for (double gap : {0.1, 0.5}) {
    const ScalarField out = propagate_SN(vortices, f, s, s + gap, StepperConfig::fixed(dt));
    const double lo = *std::min_element(out.values().begin(), out.values().end());
    const double peak = out.max_abs();
    double K = 0.0;
    for (int iy = 0; iy < grid.n(); ++iy)
      for (int ix = 0; ix < grid.n(); ++ix) {
        const double v = out(ix, iy);
        if (v <= 1e-10 * peak) continue;
        const double r2 = (Point{grid.coord(ix), grid.coord(iy)} - y).norm2();
        K = std::max(K, v * gap * std::exp(r2 / (8.0 * gap)));
      }
    const std::string tag = ", t-s=" + num(gap);
    checks.push_back({"A10", "minimum value" + tag, lo > -1e-10, lo, "> -1e-10"});
    checks.push_back(less("A10", "|mass - 1|" + tag, std::abs(out.integral() - 1.0), 1e-8));
    checks.push_back(less("A10", "fitted Gaussian-envelope constant K" + tag, K, 10.0));
    if (o.out) write_field(out_path(o, "gamma_" + format_real(gap) + ".fld"), out);
  }
  return checks;
}

SolverConfig solver_config(const ExperimentOptions& o, int n, double L, double t0, double t_end) {
  SolverConfig cfg;
  cfg.grid = Grid(o.grid_n.value_or(n), o.box_l.value_or(L));
  cfg.t0 = o.t0.value_or(t0);
  cfg.t_end = o.t_end.value_or(t_end);
  if (o.dt) cfg.dt_max = *o.dt;
  return cfg;
}

Params solver_params(const SolverConfig& c, double epsilon) {
  return {{"grid_n", std::to_string(c.grid.n())},
          {"box_l", num(c.grid.box_size())},
          {"t0", num(c.t0)},
          {"t_end", num(c.t_end)},
          {"dt_rule", "min(cfl h / max|u|, t / 50)" + (c.dt_max ? " capped at " + num(*c.dt_max) : std::string())},
          {"epsilon", num(epsilon)}};
}

std::vector<Check> two_vortex(const ExperimentOptions& o) {
  const SolverConfig cfg = solver_config(o, 512, 16.0, 1e-2, 1e-1);
  const double m = o.m.value_or(3.0);
  const FiniteMeasure mu({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}});
  const double eps = o.epsilon.value_or(0.05) * total_variation(mu);
  auto params = solver_params(cfg, eps);
  params.push_back({"m", num(m)});
  write_manifest(o, "two-vortex", params);
  const SolverRun run = solve_cauchy(mu, eps, cfg);
  const ContractionSeries M = remainder_norms(run, m);
  std::vector<Check> checks;
  checks.push_back(less("A11", "max M(t)", *std::max_element(M.total.begin(), M.total.end()), 0.05));
  const bool raw_monotone = std::is_sorted(M.raw_total.begin(), M.raw_total.end());
  checks.push_back(holds("A11", "instantaneous M nondecreasing in t", raw_monotone));
  double drift = 0.0;
  for (const Snapshot& s : run.snapshots) drift = std::max(drift, std::abs(s.circulation - 2.0) / 2.0);
  checks.push_back(less("A11", "circulation drift", drift, 1e-10));
  if (o.out) {
    write_contraction_csv(out_path(o, "contraction.csv"), M, "M");
    write_gnuplot_script(out_path(o, "contraction.gp"), "contraction.csv", "Remainder norms M(t)", true);
  }
  return checks;
}

std::vector<Check> diffuse_localized(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(256), o.box_l.value_or(16.0));
  const double t0 = o.t0.value_or(1e-3);
  const double t_end = o.t_end.value_or(1e-1);
  const FiniteMeasure mu({{{0.0, 0.0}, 1.0}}, gaussian_blob(grid, {3.0, 0.0}, 0.1, 0.4));
  const double eps = o.epsilon.value_or(0.05) * total_variation(mu);
  write_manifest(o, "diffuse-localized",
                 {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}, {"t0", num(t0)},
                  {"t_end", num(t_end)}, {"epsilon", num(eps)}, {"p", "4"}, {"q", "4"}});
  const AtomicDecomposition parts = decompose(mu, eps);
  if (parts.retained.empty()) throw DomainError("diffuse-localized: no atom retained");
  const Point z = parts.retained.front().position;
  LocalizedSeries s;
  for (double t : snapshot_times(t0, t_end, 10)) {
    const auto [w, u] = localized_norms(heat_smooth(parts.remainder, t, grid), z, t, 4.0, 4.0);
    s.t.push_back(t);
    s.vorticity.push_back(w);
    s.velocity.push_back(u);
  }
  auto ratio = [](const std::vector<double>& v) {
    return v.front() > 0.0 ? v.back() / v.front() : std::numeric_limits<double>::infinity();
  };
  std::vector<Check> checks;
  checks.push_back(at_least("A12", "vorticity (p=4) decrease factor from t=0.1 to t0", ratio(s.vorticity), 5.0));
  checks.push_back(at_least("A12", "velocity (q=4) decrease factor from t=0.1 to t0", ratio(s.velocity), 5.0));
  if (o.out) {
    std::ofstream csv(out_path(o, "localized.csv"));
    csv << "t,vorticity,velocity\n";
    for (std::size_t k = 0; k < s.t.size(); ++k)
      csv << format_real(s.t[k]) << ',' << format_real(s.vorticity[k]) << ',' << format_real(s.velocity[k]) << '\n';
    write_gnuplot_script(out_path(o, "localized.gp"), "localized.csv", "Localized diffuse norms", true);
  }
  return checks;
}

std::vector<Check> continuity(const ExperimentOptions& o) {
  const SolverConfig cfg = solver_config(o, 256, 22.0, 5e-2, 0.5);
  const std::vector<Atom> atoms{{{-1.5, 0.0}, 1.0}, {{1.5, 0.0}, 1.0}};
  const ScalarField rho = gaussian_blob(cfg.grid, {0.0, 1.5}, 0.2, 0.5);
  const ScalarField eta = gaussian_blob(cfg.grid, {0.0, -1.0}, 1.0, 0.5);
  const FiniteMeasure base(atoms, rho);
  const double eps = o.epsilon.value_or(0.05) * total_variation(base);
  write_manifest(o, "continuity", solver_params(cfg, eps));
  const SolverRun run0 = solve_cauchy(base, eps, cfg);
  std::vector<double> constants;
  std::vector<Check> checks;
  for (double delta : {1e-2, 1e-3}) {
    const SolverRun run = solve_cauchy(FiniteMeasure(atoms, rho + delta * eta), eps, cfg);
    const ContractionSeries d = solution_distance(run0, run, o.m.value_or(3.0));
    constants.push_back(*std::max_element(d.l1.begin(), d.l1.end()) / delta);
    if (o.out) write_contraction_csv(out_path(o, "contraction_delta_" + format_real(delta) + ".csv"), d, "D");
  }
  const double spread = *std::max_element(constants.begin(), constants.end()) /
                        *std::min_element(constants.begin(), constants.end());
  checks.push_back(at_most("A13", "ratio of sup L1 distance / delta across delta", spread, 3.0));
  return checks;
}

std::vector<Check> uniqueness_shadow(const ExperimentOptions& o) {
  const SolverConfig base = solver_config(o, 128, 20.0, 0.2, 0.4);
  const FiniteMeasure mu({{{0.0, 0.0}, 1.0}}, gaussian_blob(Grid(4 * base.grid.n(), base.grid.box_size()),
                                                            {2.0, 0.0}, 0.1, 0.5));
  const double eps = o.epsilon.value_or(0.05) * total_variation(mu);
  write_manifest(o, "uniqueness-shadow", solver_params(base, eps));
  std::vector<SolverRun> runs;
  for (int level = 0; level < 3; ++level) {
    SolverConfig cfg = base;
    cfg.grid = Grid(base.grid.n() << level, base.grid.box_size());
    cfg.dt_scale = 1.0 / (1 << level);
    runs.push_back(solve_cauchy(mu, eps, cfg));
  }
  const double m = o.m.value_or(3.0);
  const ContractionSeries d1 = solution_distance(runs[0], runs[1], m);
  const ContractionSeries d2 = solution_distance(runs[1], runs[2], m);
  std::vector<Check> checks;
  const double ratio = d2.total.back() > 0.0 ? d1.total.back() / d2.total.back() : std::numeric_limits<double>::infinity();
  checks.push_back(at_least("A14", "Delta(t_end) reduction under refinement", ratio, 4.0));
  if (o.out) {
    write_contraction_csv(out_path(o, "contraction_coarse.csv"), d1, "D");
    write_contraction_csv(out_path(o, "contraction_fine.csv"), d2, "D");
  }
  return checks;
}

std::vector<Check> biot_savart_oracle(const ExperimentOptions& o) {
  const Grid grid(o.grid_n.value_or(256), o.box_l.value_or(40.0));
  write_manifest(o, "biot-savart-oracle", {{"grid_n", std::to_string(grid.n())}, {"box_l", num(grid.box_size())}});
  std::vector<Check> checks;
  const ScalarField G = sample_gaussian(grid);
  const VectorField u = velocity_free_space(G);
  double err = 0.0, peak = 0.0;
  for (int iy = 0; iy < grid.n(); ++iy)
    for (int ix = 0; ix < grid.n(); ++ix) {
      const Vec2 v = velocity_profile({grid.coord(ix), grid.coord(iy)});
      err = std::max(err, std::hypot(u.x(ix, iy) - v.x, u.y(ix, iy) - v.y));
      peak = std::max(peak, v.norm());
    }
  checks.push_back(less("A15", "free-space velocity of G vs v^G, relative max error", err / peak, 1e-3));
  const VelocityGradient grad = velocity_gradient_free_space(G);
  checks.push_back(less("A15", "max |div u| (free space, G)", grad.divergence().max_abs(), 1e-8));
  checks.push_back(less("A15", "max |curl u - omega| (free space, G)", (grad.curl() - G).max_abs(), 1e-6));
  const ScalarField d1 = sample_d1_gaussian(grid);
  checks.push_back(less("A15", "max |div u| (periodic, d1G)", divergence(velocity_periodic(d1)).max_abs(), 1e-8));
  std::vector<double> ratios;
  for (double lambda : {1.0, 2.0, 4.0}) {
    const ScalarField w = ScalarField::sample(
        grid, [&](double x, double y) { return lambda * lambda * gaussian_profile({lambda * x, lambda * y}); });
    ratios.push_back(hls_ratio(w, 4.0 / 3.0));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  checks.push_back(less("A15", "HLS ratio spread across lambda in {1,2,4}", (*hi - *lo) / *lo, 1e-3));
  if (o.out) {
    std::ofstream csv(out_path(o, "hls.csv"));
    csv << "lambda,ratio\n";
    const double lambdas[] = {1.0, 2.0, 4.0};
    for (std::size_t i = 0; i < ratios.size(); ++i) csv << format_real(lambdas[i]) << ',' << format_real(ratios[i]) << '\n';
  }
  return checks;
}

}  // namespace

ExperimentOptions ExperimentOptions::from_config(const Config& c) {
  ExperimentOptions o;
  if (auto v = c.get_int("grid_n")) o.grid_n = static_cast<int>(*v);
  if (auto v = c.get_double("box_l")) o.box_l = *v;
  if (auto v = c.get_double("t0")) o.t0 = *v;
  if (auto v = c.get_double("t_end")) o.t_end = *v;
  if (auto v = c.get_double("dt")) o.dt = *v;
  if (auto v = c.get_double("alpha")) o.alpha = *v;
  if (auto v = c.get_double("epsilon")) o.epsilon = *v;
  if (auto v = c.get_double("m")) o.m = *v;
  if (auto v = c.get_int("basis")) o.basis = static_cast<int>(*v);
  if (auto v = c.get_int("seed")) o.seed = static_cast<std::uint64_t>(*v);
  if (auto v = c.get("out")) o.out = *v;
  return o;
}

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> list{
      {"oseen-exact", {"A1", "A2"}, "single Oseen vortex through the decomposed and direct solvers", oseen_exact},
      {"asym-decay", {"A3"}, "convergence of a perturbed vortex to Oseen in self-similar variables", asym_decay},
      {"semigroup-kernel", {"A4", "A6"}, "explicit Fokker-Planck semigroup: eigenfunctions, semigroup law, decay",
       semigroup_kernel},
      {"commutation", {"A5"}, "gradient commutation of the Fokker-Planck semigroup", commutation},
      {"t-alpha-decay", {"A7"}, "decay of the linearization at Oseen", t_alpha_decay},
      {"s1-decay", {"A8"}, "decay of the one-vortex self-similar propagator", s1_decay},
      {"spectrum", {"A9"}, "Hermite-Galerkin spectrum of the linearization at Oseen", spectrum},
      {"sn-gaussian-bound", {"A10"}, "positivity, mass and Gaussian envelope of the frozen-vortex propagator",
       sn_gaussian_bound},
      {"two-vortex", {"A11"}, "remainder norms for two point vortices", two_vortex},
      {"diffuse-localized", {"A12"}, "localized decay of the diffuse remainder near a vortex", diffuse_localized},
      {"continuity", {"A13"}, "continuous dependence on the initial measure", continuity},
      {"uniqueness-shadow", {"A14"}, "convergence of the remainder under grid and step refinement", uniqueness_shadow},
      {"biot-savart-oracle", {"A15"}, "free-space Biot-Savart against the Oseen velocity", biot_savart_oracle},
  };
  return list;
}

const Experiment* find_experiment(const std::string& name) {
  for (const Experiment& e : experiments())
    if (e.name == name) return &e;
  return nullptr;
}

std::string format_check(const Check& c) {
  return std::string(c.passed ? "PASS" : "FAIL") + " " + c.criterion + " " + format_real(c.measured) + " " +
         c.threshold + "  # " + c.label;
}

}  // namespace nsm
