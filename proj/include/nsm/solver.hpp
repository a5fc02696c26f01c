#pragma once

#include <optional>
#include <vector>

#include "nsm/field.hpp"
#include "nsm/measure.hpp"
#include "nsm/oseen.hpp"
#include "nsm/propagators.hpp"

namespace nsm {

enum class SolverMode { Direct, Decomposed };

struct SolverConfig {
  Grid grid{256, 40.0};
  double t0 = 1e-2;
  double t_end = 1.0;
  SolverMode mode = SolverMode::Decomposed;
  /// dt = dt_scale * min(cfl h / max|u|, dt_fraction t), clipped to snapshots.
  double cfl = 0.5;
  double dt_fraction = 1.0 / 50.0;
  double dt_scale = 1.0;
  /// Optional hard cap on the step.
  std::optional<double> dt_max;
  /// Snapshots are geometric in t: this many per factor of ten.
  int snapshots_per_decade = 10;
  bool dealias = true;

  void validate() const;
};

/// N analytic Oseen backgrounds plus a gridded remainder
///   omega = sum_i alpha_i/t G((x - z_i)/sqrt(t)) + diffuse + interaction.
/// `diffuse` evolves from e^{t0 Delta} mu_0; `interaction` starts at zero and
/// is driven by the cross-advection of the backgrounds.
struct VortexSystem {
  std::vector<OseenVortex> backgrounds;
  ScalarField diffuse;
  ScalarField interaction;
  double t = 0.0;
  /// Minimum pairwise distance of the centers (+inf for N <= 1).
  double separation = 0.0;

  VortexSystem(std::vector<OseenVortex> backgrounds, ScalarField diffuse, double t);

  const Grid& grid() const { return diffuse.grid(); }
  /// diffuse + interaction.
  ScalarField remainder() const;
  /// Backgrounds sampled on the grid plus the remainder.
  ScalarField total_vorticity() const;
  /// sum alpha_i + integral of the remainder.
  double circulation() const;
};

/// decompose(mu, epsilon) -> backgrounds at the retained atoms, diffuse part
/// heat_smooth(mu_0, t0). MarginError if an atom sits within 6 sqrt(t0) of
/// the box edge or the remainder has not decayed there; DomainError t0 <= 0.
VortexSystem initialize_from_measure(const FiniteMeasure& mu, double epsilon, double t0, const Grid& grid);

/// One IF-RK4 step of the remainder equations; backgrounds only advance
/// through t. The remainder velocity uses the free-space Biot-Savart law.
VortexSystem step_decomposed(const VortexSystem& sys, double dt, const SolverConfig& cfg);

/// One IF-RK4 step of the full vorticity equation, advection in divergence
/// form, velocity routed by circulation.
ScalarField step_direct(const ScalarField& omega, double t, double dt, const SolverConfig& cfg);

/// Per-snapshot record of a run.
struct Snapshot {
  double t = 0.0;
  /// Remainder split (decomposed mode); in direct mode `diffuse` carries the
  /// whole vorticity and `interaction` is zero.
  ScalarField diffuse;
  ScalarField interaction;
  double l1 = 0.0;
  double circulation = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  /// sqrt(t) max|u| on the grid.
  double scaled_speed = 0.0;
};

struct SolverRun {
  SolverConfig config;
  std::vector<OseenVortex> backgrounds;
  double separation = 0.0;
  double initial_total_variation = 0.0;
  double initial_mass = 0.0;
  std::vector<Snapshot> snapshots;
  /// max over snapshots of ||omega||_1 / total_variation(mu).
  double worst_l1_ratio = 0.0;
  /// True when every snapshot satisfies ||omega||_1 <= TV(mu) (1 + 1e-6).
  bool l1_bound_holds = true;

  bool decomposed() const { return config.mode == SolverMode::Decomposed; }
  /// Total vorticity at snapshot k.
  ScalarField vorticity(std::size_t k) const;
};

/// Snapshot times t0 * 10^{j / per_decade} up to t_end (t_end always included).
std::vector<double> snapshot_times(double t0, double t_end, int per_decade);

/// Full pipeline: decompose, initialize, march with snapshots.
SolverRun solve_cauchy(const FiniteMeasure& mu, double epsilon, const SolverConfig& cfg);

/// Nonlinear vorticity equation in self-similar variables,
///   d_tau w = L w - div(v^w w),
/// from tau = 0 to tau_end, v^w the free-space velocity of w.
Trajectory evolve_self_similar(const ScalarField& w0, double tau_end, const StepperConfig& cfg);

/// C-infinity bump: 1 for r <= 1/4, 0 for r >= 1/3.
double partition_bump(double r);

}  // namespace nsm
