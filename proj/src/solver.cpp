#include "nsm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"

namespace nsm {
namespace {

constexpr double kMargin = 1e-10;

// Analytic background quantities on the grid at one time.
struct BackgroundFields {
  VectorField velocity;
  VectorField gradient;
  /// sum_i (sum_{j != i} u_j) . grad omega_i
  ScalarField cross;
};

BackgroundFields sample_backgrounds(const std::vector<OseenVortex>& bg, double t, const Grid& g) {
  BackgroundFields f{VectorField(g), VectorField(g), ScalarField(g)};
  if (bg.empty()) return f;
  const std::size_t count = bg.size();
  std::vector<Vec2> u(count), grad(count);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const Point x{g.coord(ix), g.coord(iy)};
      Vec2 us, gs;
      for (std::size_t i = 0; i < count; ++i) {
        u[i] = bg[i].velocity(x, t);
        grad[i] = bg[i].vorticity_gradient(x, t);
        us += u[i];
        gs += grad[i];
      }
      double cross = 0.0;
      if (count > 1)
        for (std::size_t i = 0; i < count; ++i) cross += (us - u[i]).dot(grad[i]);
      f.velocity.x(ix, iy) = us.x;
      f.velocity.y(ix, iy) = us.y;
      f.gradient.x(ix, iy) = gs.x;
      f.gradient.y(ix, iy) = gs.y;
      f.cross(ix, iy) = cross;
    }
  return f;
}

VectorField times(const VectorField& v, const ScalarField& w) { return VectorField(v.x * w, v.y * w); }

// Explicit part of the remainder equations for (diffuse, interaction):
//   N_d = -div(u d),  N_b = -div(u b) - sum_i (u - u_i) . grad omega_i,
// u = background velocity + free-space velocity of d + b.
class DecomposedTerm {
 public:
  DecomposedTerm(const std::vector<OseenVortex>& bg, const Grid& g) : bg_(bg), grid_(g) {}

  std::vector<Spectrum> operator()(const std::vector<ScalarField>& w, double t) {
    const BackgroundFields& b = backgrounds(t);
    const ScalarField rem = w[0] + w[1];
    VectorField u = b.velocity;
    if (rem.max_abs() > 0.0) {
      const VectorField ur = velocity_free_space(rem);
      if (first_) remainder_speed_ = ur.max_magnitude();
      u += ur;
      ScalarField source = b.cross + ur.x * b.gradient.x + ur.y * b.gradient.y;
      return finish(u, w, source);
    }
    if (first_) remainder_speed_ = 0.0;
    return finish(u, w, b.cross);
  }

  /// max|u~| at the first evaluation since reset().
  double remainder_speed() const { return remainder_speed_; }
  void reset() { first_ = true; }

 private:
  std::vector<Spectrum> finish(const VectorField& u, const std::vector<ScalarField>& w, const ScalarField& source) {
    first_ = false;
    std::vector<Spectrum> out;
    Spectrum nd = divergence_spectrum(times(u, w[0]));
    nd *= -1.0;
    Spectrum nb = divergence_spectrum(times(u, w[1]));
    Spectrum s = transform(source);
    // The source is a divergence and integrates to zero; keep mass exact.
    s.at(0, 0) = 0.0;
    nb += s;
    nb *= -1.0;
    out.push_back(std::move(nd));
    out.push_back(std::move(nb));
    return out;
  }

  const BackgroundFields& backgrounds(double t) {
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    if (cache_.size() >= 4) cache_.erase(cache_.begin());
    return cache_.emplace(t, sample_backgrounds(bg_, t, grid_)).first->second;
  }

  const std::vector<OseenVortex>& bg_;
  Grid grid_;
  std::map<double, BackgroundFields> cache_;
  double remainder_speed_ = 0.0;
  bool first_ = true;
};

VortexSystem advance(const VortexSystem& sys, double dt, const SolverConfig& cfg, DecomposedTerm& term) {
  term.reset();
  const SystemTerm system = [&](const std::vector<ScalarField>& w, double t) { return term(w, t); };
  auto next = if_rk4_step({transform(sys.diffuse), transform(sys.interaction)}, sys.t, dt, system, cfg.dealias);
  VortexSystem out = sys;
  out.diffuse = inverse_transform(next[0]);
  out.interaction = inverse_transform(next[1]);
  out.t = sys.t + dt;
  return out;
}

Spectrum direct_term(const ScalarField& w) {
  if (w.max_abs() == 0.0) return Spectrum(w.grid());
  Spectrum n = divergence_spectrum(times(biot_savart(w, BiotSavartRoute::Auto), w));
  n *= -1.0;
  return n;
}

double step_size(const SolverConfig& cfg, double t, double speed) {
  double dt = cfg.dt_fraction * t;
  if (speed > 0.0) dt = std::min(dt, cfg.cfl * cfg.grid.spacing() / speed);
  if (cfg.dt_max) dt = std::min(dt, *cfg.dt_max);
  return dt * cfg.dt_scale;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(t0 > 0.0)) throw DomainError("solver: t0 must be positive");
  if (!(t_end > t0)) throw DomainError("solver: t_end must exceed t0");
  if (!(cfl > 0.0) || !(dt_fraction > 0.0) || !(dt_scale > 0.0)) throw DomainError("solver: step controls must be positive");
  if (dt_max && !(*dt_max > 0.0)) throw DomainError("solver: dt_max must be positive");
  if (snapshots_per_decade < 1) throw DomainError("solver: snapshots_per_decade must be >= 1");
}

double partition_bump(double r) {
  const double lo = 0.25, hi = 1.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double s = (hi - r) / (hi - lo);
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

VortexSystem::VortexSystem(std::vector<OseenVortex> bg, ScalarField d, double time)
    : backgrounds(std::move(bg)), diffuse(std::move(d)), interaction(diffuse.grid()), t(time) {
  separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < backgrounds.size(); ++i)
    for (std::size_t j = i + 1; j < backgrounds.size(); ++j)
      separation = std::min(separation, (backgrounds[i].z - backgrounds[j].z).norm());
}

ScalarField VortexSystem::remainder() const { return diffuse + interaction; }

ScalarField VortexSystem::total_vorticity() const {
  ScalarField out = remainder();
  const Grid& g = grid();
  for (const OseenVortex& v : backgrounds)
    for (int iy = 0; iy < g.n(); ++iy)
      for (int ix = 0; ix < g.n(); ++ix) out(ix, iy) += v.vorticity({g.coord(ix), g.coord(iy)}, t);
  return out;
}

double VortexSystem::circulation() const {
  double s = diffuse.integral() + interaction.integral();
  for (const OseenVortex& v : backgrounds) s += v.alpha;
  return s;
}

VortexSystem initialize_from_measure(const FiniteMeasure& mu, double epsilon, double t0, const Grid& grid) {
  if (!(t0 > 0.0)) throw DomainError("initialize_from_measure: t0 must be positive");
  const AtomicDecomposition dec = decompose(mu, epsilon);
  const double half = 0.5 * grid.box_size();
  const double margin = 6.0 * std::sqrt(t0);
  std::vector<OseenVortex> bg;
  for (const Atom& a : dec.retained) {
    if (std::abs(a.position.x) > half - margin || std::abs(a.position.y) > half - margin)
      throw MarginError("initialize_from_measure: atom within 6 sqrt(t0) of the box boundary");
    bg.push_back({a.mass, a.position});
  }
  if (std::isfinite(dec.min_separation) && t0 > dec.min_separation * dec.min_separation / 100.0)
    std::clog << "warning: t0 exceeds d^2/100 for the retained vortices\n";
  ScalarField d = heat_smooth(dec.remainder, t0, grid);
  require_boundary_decay(d, kMargin, "initialize_from_measure");
  return VortexSystem(std::move(bg), std::move(d), t0);
}

VortexSystem step_decomposed(const VortexSystem& sys, double dt, const SolverConfig& cfg) {
  const double speed = background_speed_bound(sys.backgrounds, sys.t);
  if (speed > 0.0 && dt > sys.grid().spacing() / (2.0 * speed))
    throw StabilityError("step_decomposed: dt exceeds h / (2 max|u_O|)");
  DecomposedTerm term(sys.backgrounds, sys.grid());
  return advance(sys, dt, cfg, term);
}

ScalarField step_direct(const ScalarField& omega, double t, double dt, const SolverConfig& cfg) {
  const ExplicitTerm term = [](const ScalarField& w, double) { return direct_term(w); };
  return inverse_transform(if_rk4_step(transform(omega), t, dt, term, cfg.dealias));
}

std::vector<double> snapshot_times(double t0, double t_end, int per_decade) {
  std::vector<double> out{t0};
  for (int j = 1;; ++j) {
    const double t = t0 * std::pow(10.0, static_cast<double>(j) / per_decade);
    if (t >= t_end * (1.0 - 1e-12)) break;
    out.push_back(t);
  }
  out.push_back(t_end);
  return out;
}

ScalarField SolverRun::vorticity(std::size_t k) const {
  const Snapshot& s = snapshots.at(k);
  VortexSystem sys(backgrounds, s.diffuse, s.t);
  sys.interaction = s.interaction;
  return sys.total_vorticity();
}

SolverRun solve_cauchy(const FiniteMeasure& mu, double epsilon, const SolverConfig& cfg) {
  cfg.validate();
  SolverRun run;
  run.config = cfg;
  run.initial_total_variation = total_variation(mu);
  run.initial_mass = mu.total_mass();

  VortexSystem sys = cfg.mode == SolverMode::Decomposed
                         ? initialize_from_measure(mu, epsilon, cfg.t0, cfg.grid)
                         : VortexSystem({}, heat_smooth(mu, cfg.t0, cfg.grid), cfg.t0);
  run.backgrounds = sys.backgrounds;
  run.separation = sys.separation;

  auto record = [&](const VortexSystem& s) {
    Snapshot snap{s.t, s.diffuse, s.interaction};
    const ScalarField omega = s.total_vorticity();
    snap.l1 = lp_norm(omega, 1.0);
    snap.circulation = s.circulation();
    const auto [lo, hi] = std::minmax_element(omega.values().begin(), omega.values().end());
    snap.min_value = *lo;
    snap.max_value = *hi;
    VectorField u = background_velocity(s.backgrounds, s.t, s.grid());
    const ScalarField rem = s.remainder();
    if (rem.max_abs() > 0.0) u += velocity_free_space(rem);
    snap.scaled_speed = std::sqrt(s.t) * u.max_magnitude();
    if (run.initial_total_variation > 0.0) {
      const double ratio = snap.l1 / run.initial_total_variation;
      run.worst_l1_ratio = std::max(run.worst_l1_ratio, ratio);
      if (ratio > 1.0 + 1e-6) run.l1_bound_holds = false;
    } else if (snap.l1 > 0.0) {
      run.l1_bound_holds = false;
    }
    run.snapshots.push_back(std::move(snap));
  };

  const std::vector<double> times = snapshot_times(cfg.t0, cfg.t_end, cfg.snapshots_per_decade);
  record(sys);
  DecomposedTerm term(sys.backgrounds, cfg.grid);
  double remainder_speed = 0.0;
  const ScalarField rem0 = sys.remainder();
  if (rem0.max_abs() > 0.0) remainder_speed = velocity_free_space(rem0).max_magnitude();

  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    while (sys.t < target * (1.0 - 1e-13)) {
      const double speed = background_speed_bound(sys.backgrounds, sys.t) + remainder_speed;
      double dt = step_size(cfg, sys.t, speed);
      if (sys.t + dt > target * (1.0 - 1e-13)) dt = target - sys.t;
      if (cfg.mode == SolverMode::Decomposed) {
        sys = advance(sys, dt, cfg, term);
        remainder_speed = term.remainder_speed();
      } else {
        sys.diffuse = step_direct(sys.diffuse, sys.t, dt, cfg);
        sys.t += dt;
        remainder_speed = 0.0;
        if (sys.diffuse.max_abs() > 0.0)
          remainder_speed = biot_savart(sys.diffuse, BiotSavartRoute::Auto).max_magnitude();
      }
    }
    sys.t = target;
    record(sys);
  }
  return run;
}

Trajectory evolve_self_similar(const ScalarField& w0, double tau_end, const StepperConfig& cfg) {
  require_boundary_decay(w0, kMargin, "evolve_self_similar");
  const Grid& g = w0.grid();
  const double dt = self_similar_step(g, cfg, 2.0 * lp_norm(w0, 1.0) * velocity_profile_max());
  VectorField half_xi(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      half_xi.x(ix, iy) = 0.5 * g.coord(ix);
      half_xi.y(ix, iy) = 0.5 * g.coord(iy);
    }
  const ExplicitTerm term = [&](const ScalarField& w, double) {
    VectorField drift = velocity_free_space(w);
    drift *= -1.0;
    drift += half_xi;
    return divergence_spectrum(times(drift, w));
  };
  return march(w0, 0.0, tau_end, dt, term, cfg.dealias, cfg.sample_interval);
}

}  // namespace nsm
