#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsm/field.hpp"
#include "nsm/oseen.hpp"

namespace nsm {

/// Time-step control: a fixed step or a CFL number against the maximum
/// advecting speed. Exactly one of the two is set.
struct StepperConfig {
  std::optional<double> dt;
  std::optional<double> cfl;
  /// 2/3-rule dealiasing of the explicit term.
  bool dealias = true;
  /// Spacing of stored trajectory samples in the evolution variable.
  double sample_interval = 0.1;

  static StepperConfig fixed(double dt, double sample_interval = 0.1);
  static StepperConfig adaptive(double cfl, double sample_interval = 0.1);
  void validate() const;
};

/// Time-stamped states of one evolution (time is t or tau, per producer).
struct Trajectory {
  std::vector<double> times;
  std::vector<ScalarField> states;

  void push(double time, ScalarField state);
  std::size_t size() const { return times.size(); }
  /// Writes `<prefix>_<time>_<index>.fld` per state and `series.csv` with
  /// columns index,time,l1,l2,linf,l2m15,l2m30,circulation.
  void dump(const std::filesystem::path& dir, const std::string& prefix = "w") const;
};

/// Least-squares fit of log(norm) against tau.
struct DecayFit {
  std::vector<double> taus;
  std::vector<double> norms;
  double rate = 0.0;
  /// RMS deviation of log(norm) from the fitted line.
  double residual = 0.0;
};

/// Norm used by fit_decay: || (1+|xi|^2)^{m/2} w ||_{L^q}; m = 0 is plain L^q.
struct NormSpec {
  double q = 2.0;
  double m = 0.0;
};

double evaluate_norm(const ScalarField& f, const NormSpec& spec);

/// Fit over samples with tau in [tau_min, tau_max]. DomainError for fewer
/// than 5 samples in the window; DegenerateError if a norm there is at or
/// below 1e-13.
DecayFit fit_decay(std::span<const double> taus, std::span<const double> norms);
DecayFit fit_decay(const Trajectory& trajectory, const NormSpec& norm, double tau_min, double tau_max);

// ---------------------------------------------------------------------------
// Integrating-factor RK4 for dw/dt = Laplacian(w) + N(w, t).

/// Explicit part of the right-hand side, given the state in physical space.
/// Returns its spectrum; the caller's stepper applies the dealiasing mask.
using ExplicitTerm = std::function<Spectrum(const ScalarField& w, double t)>;

/// One step of the Lawson (integrating-factor) RK4 scheme: diffusion is
/// integrated exactly through exp(-|k|^2 dt), the explicit term by classical
/// RK4 in the transformed variable.
Spectrum if_rk4_step(const Spectrum& w, double t, double dt, const ExplicitTerm& term, bool dealias);

/// Explicit part for several coupled fields sharing one grid.
using SystemTerm = std::function<std::vector<Spectrum>(const std::vector<ScalarField>& w, double t)>;

/// if_rk4_step for a system of fields, each with its own diffusion.
std::vector<Spectrum> if_rk4_step(const std::vector<Spectrum>& w, double t, double dt, const SystemTerm& term,
                                  bool dealias);

/// Spectrum of the divergence of `flux`, the conservative form of an
/// advection term; the zero mode is identically zero.
Spectrum divergence_spectrum(const VectorField& flux);

/// Marches from t0 to t_end with step `dt` (the last step is shortened to
/// land on t_end), storing a sample every `sample_interval` plus both ends.
Trajectory march(const ScalarField& w0, double t0, double t_end, double dt, const ExplicitTerm& term,
                 bool dealias, double sample_interval);

// ---------------------------------------------------------------------------
// Linear propagators.

/// Time-dependent velocity provider U(x, t) sampled on a grid.
using VelocityProvider = std::function<VectorField(double t)>;

/// One IF-RK4 step of d_t omega + U . grad omega = Laplacian omega with the
/// advection in divergence form. StabilityError if dt > h / (2 max|U(t)|).
ScalarField advect_diffuse_step(const ScalarField& omega, const VelocityProvider& velocity, double t, double dt,
                                bool dealias = true);

/// Sum over vortices of alpha_i/sqrt(t) v^G((x - z_i)/sqrt(t)) on `grid`.
VectorField background_velocity(std::span<const OseenVortex> vortices, double t, const Grid& grid);
/// Upper bound of max_x |background_velocity| at time t.
double background_speed_bound(std::span<const OseenVortex> vortices, double t);

/// S_N(t, s) f: evolution under the frozen multi-Oseen background from time
/// s to time t. StabilityError for a fixed dt above the CFL limit;
/// MarginError when the result has not decayed at the box edge.
ScalarField propagate_SN(std::span<const OseenVortex> vortices, const ScalarField& f, double s, double t,
                         const StepperConfig& cfg);

/// One-vortex self-similar evolution d_tau w + alpha v^G . grad w = L w from
/// tau = 0 to tau_end.
Trajectory evolve_S1(double alpha, const ScalarField& w0, double tau_end, const StepperConfig& cfg);

/// Linearization at alpha G:
///   d_tau w = L w - alpha (v^G . grad w + v^w . grad G),
/// v^w the free-space Biot-Savart velocity of w, grad G analytic.
Trajectory evolve_T_alpha(double alpha, const ScalarField& w0, double tau_end, const StepperConfig& cfg);

/// Step used by the self-similar evolutions: cfg.dt, or the CFL step
/// against a drift of L/4 plus `extra_speed`. Throws StabilityError when a
/// fixed dt exceeds min(CFL limit, 4h/L).
double self_similar_step(const Grid& grid, const StepperConfig& cfg, double extra_speed);

}  // namespace nsm
