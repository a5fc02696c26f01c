#include "nsm/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "nsm/biot_savart.hpp"
#include "nsm/errors.hpp"
#include "nsm/field_io.hpp"

namespace nsm {
namespace {

constexpr std::complex<double> I{0.0, 1.0};
constexpr double kMargin = 1e-10;
constexpr double kDefaultCfl = 0.5;

struct Factors {
  std::vector<double> full, half;
};

// exp(-|k|^2 dt) and exp(-|k|^2 dt / 2), cached per (grid, dt).
const Factors& integrating_factors(const Grid& g, double dt) {
  thread_local std::map<std::tuple<int, double, double>, Factors> cache;
  auto key = std::make_tuple(g.n(), g.box_size(), dt);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 64) cache.clear();
  const Wavenumbers k(g);
  const int cols = g.n() / 2 + 1;
  Factors f;
  f.full.resize(static_cast<std::size_t>(g.n()) * cols);
  f.half.resize(f.full.size());
  for (int r = 0; r < g.n(); ++r)
    for (int c = 0; c < cols; ++c) {
      const double k2 = k.kx[c] * k.kx[c] + k.ky[r] * k.ky[r];
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      f.full[i] = std::exp(-k2 * dt);
      f.half[i] = std::exp(-0.5 * k2 * dt);
    }
  return cache.emplace(key, std::move(f)).first->second;
}

// Fixed-dt stability check shared by the grid-velocity propagators.
void check_cfl(double dt, double h, double speed, const char* what) {
  if (speed > 0.0 && dt > h / (2.0 * speed))
    throw StabilityError(std::string(what) + ": dt exceeds h / (2 max|U|)");
}

// xi/2 - alpha v^G(xi): the drift of the one-vortex self-similar equations.
VectorField self_similar_drift(const Grid& g, double alpha) {
  VectorField d(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const Point xi{g.coord(ix), g.coord(iy)};
      const Vec2 v = velocity_profile(xi);
      d.x(ix, iy) = 0.5 * xi.x - alpha * v.x;
      d.y(ix, iy) = 0.5 * xi.y - alpha * v.y;
    }
  return d;
}

VectorField product(const VectorField& v, const ScalarField& w) {
  VectorField out = v;
  out.x *= w;
  out.y *= w;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

StepperConfig StepperConfig::fixed(double dt, double sample_interval) {
  StepperConfig c;
  c.dt = dt;
  c.sample_interval = sample_interval;
  return c;
}

StepperConfig StepperConfig::adaptive(double cfl, double sample_interval) {
  StepperConfig c;
  c.cfl = cfl;
  c.sample_interval = sample_interval;
  return c;
}

void StepperConfig::validate() const {
  if (dt.has_value() == cfl.has_value()) throw DomainError("StepperConfig: set exactly one of dt and cfl");
  if (dt && !(*dt > 0.0)) throw DomainError("StepperConfig: dt must be positive");
  if (cfl && !(*cfl > 0.0)) throw DomainError("StepperConfig: cfl must be positive");
  if (!(sample_interval > 0.0)) throw DomainError("StepperConfig: sample_interval must be positive");
}

void Trajectory::push(double time, ScalarField state) {
  times.push_back(time);
  states.push_back(std::move(state));
}

void Trajectory::dump(const std::filesystem::path& dir, const std::string& prefix) const {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "series.csv");
  if (!csv) throw ConfigError("cannot write " + (dir / "series.csv").string());
  csv << "index,time,l1,l2,linf,l2m15,l2m30,circulation\n";
  for (std::size_t i = 0; i < size(); ++i) {
    const ScalarField& f = states[i];
    write_field(dir / (prefix + "_" + format_real(times[i]) + "_" + std::to_string(i) + ".fld"), f);
    csv << i << ',' << format_real(times[i]) << ',' << format_real(lp_norm(f, 1.0)) << ','
        << format_real(lp_norm(f, 2.0)) << ',' << format_real(lp_norm(f, std::numeric_limits<double>::infinity()))
        << ',' << format_real(weighted_norm(f, 2.0, 1.5)) << ',' << format_real(weighted_norm(f, 2.0, 3.0)) << ','
        << format_real(f.integral()) << '\n';
  }
}

double evaluate_norm(const ScalarField& f, const NormSpec& spec) {
  return spec.m == 0.0 ? lp_norm(f, spec.q) : weighted_norm(f, spec.q, spec.m);
}

DecayFit fit_decay(std::span<const double> taus, std::span<const double> norms) {
  if (taus.size() != norms.size()) throw DomainError("fit_decay: size mismatch");
  if (taus.size() < 5) throw DomainError("fit_decay: need at least 5 samples in the window");
  DecayFit fit;
  fit.taus.assign(taus.begin(), taus.end());
  fit.norms.assign(norms.begin(), norms.end());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(norms[i] > 1e-13)) throw DegenerateError("fit_decay: norm at the noise floor inside the window");
    st += taus[i];
    sy += std::log(norms[i]);
  }
  const double count = static_cast<double>(taus.size());
  const double tm = st / count, ym = sy / count;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    stt += (taus[i] - tm) * (taus[i] - tm);
    sty += (taus[i] - tm) * (std::log(norms[i]) - ym);
  }
  fit.rate = sty / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double r = std::log(norms[i]) - (ym + fit.rate * (taus[i] - tm));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

DecayFit fit_decay(const Trajectory& trajectory, const NormSpec& norm, double tau_min, double tau_max) {
  std::vector<double> taus, norms;
  const double slack = 1e-9 * std::max(1.0, std::abs(tau_max));
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double tau = trajectory.times[i];
    if (tau < tau_min - slack || tau > tau_max + slack) continue;
    taus.push_back(tau);
    norms.push_back(evaluate_norm(trajectory.states[i], norm));
  }
  return fit_decay(taus, norms);
}

// ---------------------------------------------------------------------------

std::vector<Spectrum> if_rk4_step(const std::vector<Spectrum>& w, double t, double dt, const SystemTerm& term,
                                  bool dealias_output) {
  if (w.empty()) return {};
  const Grid& g = w.front().grid();
  const Factors& E = integrating_factors(g, dt);
  const std::size_t fields = w.size();
  const std::size_t size = w.front().coeffs().size();

  auto eval = [&](const std::vector<Spectrum>& state, double time) {
    std::vector<ScalarField> phys;
    phys.reserve(fields);
    for (const Spectrum& s : state) phys.push_back(inverse_transform(s));
    std::vector<Spectrum> out = term(phys, time);
    if (dealias_output)
      for (Spectrum& s : out) dealias(s);
    return out;
  };

  std::vector<Spectrum> stage(fields, Spectrum(g));
  const auto a = eval(w, t);
  for (std::size_t f = 0; f < fields; ++f)
    for (std::size_t i = 0; i < size; ++i)
      stage[f].coeffs()[i] = E.half[i] * (w[f].coeffs()[i] + 0.5 * dt * a[f].coeffs()[i]);
  const auto b = eval(stage, t + 0.5 * dt);
  for (std::size_t f = 0; f < fields; ++f)
    for (std::size_t i = 0; i < size; ++i)
      stage[f].coeffs()[i] = E.half[i] * w[f].coeffs()[i] + 0.5 * dt * b[f].coeffs()[i];
  const auto c = eval(stage, t + 0.5 * dt);
  for (std::size_t f = 0; f < fields; ++f)
    for (std::size_t i = 0; i < size; ++i)
      stage[f].coeffs()[i] = E.full[i] * w[f].coeffs()[i] + dt * E.half[i] * c[f].coeffs()[i];
  const auto d = eval(stage, t + dt);

  std::vector<Spectrum> out(fields, Spectrum(g));
  for (std::size_t f = 0; f < fields; ++f)
    for (std::size_t i = 0; i < size; ++i)
      out[f].coeffs()[i] =
          E.full[i] * w[f].coeffs()[i] +
          dt / 6.0 *
              (E.full[i] * a[f].coeffs()[i] + 2.0 * E.half[i] * (b[f].coeffs()[i] + c[f].coeffs()[i]) +
               d[f].coeffs()[i]);
  return out;
}

Spectrum if_rk4_step(const Spectrum& w, double t, double dt, const ExplicitTerm& term, bool dealias_output) {
  const SystemTerm system = [&](const std::vector<ScalarField>& f, double time) {
    return std::vector<Spectrum>{term(f.front(), time)};
  };
  return std::move(if_rk4_step(std::vector<Spectrum>{w}, t, dt, system, dealias_output).front());
}

Spectrum divergence_spectrum(const VectorField& flux) {
  const Wavenumbers k(flux.grid());
  Spectrum fx = transform(flux.x);
  const Spectrum fy = transform(flux.y);
  for (int r = 0; r < fx.rows(); ++r)
    for (int c = 0; c < fx.cols(); ++c) fx.at(r, c) = I * (k.dx[c] * fx.at(r, c) + k.dy[r] * fy.at(r, c));
  return fx;
}

Trajectory march(const ScalarField& w0, double t0, double t_end, double dt, const ExplicitTerm& term, bool dealias_output,
                 double sample_interval) {
  if (!(t_end >= t0)) throw DomainError("march: t_end must not precede t0");
  if (!(dt > 0.0) || !(sample_interval > 0.0)) throw DomainError("march: dt and sample_interval must be positive");
  Trajectory traj;
  traj.push(t0, w0);
  Spectrum w = transform(w0);
  double t = t0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  for (int k = 1; t < t_end - eps; ++k) {
    const double target = std::min(t_end, t0 + k * sample_interval);
    while (t < target - eps) {
      const double remaining = target - t;
      // Split the remainder evenly so no sliver step appears.
      const double steps = std::ceil(remaining / dt - 1e-9);
      const double h = remaining / steps;
      w = if_rk4_step(w, t, h, term, dealias_output);
      t = (steps == 1.0) ? target : t + h;
    }
    t = target;
    traj.push(t, inverse_transform(w));
  }
  return traj;
}

// ---------------------------------------------------------------------------

ScalarField advect_diffuse_step(const ScalarField& omega, const VelocityProvider& velocity, double t, double dt,
                                bool dealias_output) {
  check_cfl(dt, omega.grid().spacing(), velocity(t).max_magnitude(), "advect_diffuse_step");
  const ExplicitTerm term = [&](const ScalarField& w, double s) {
    Spectrum n = divergence_spectrum(product(velocity(s), w));
    n *= -1.0;
    return n;
  };
  return inverse_transform(if_rk4_step(transform(omega), t, dt, term, dealias_output));
}

VectorField background_velocity(std::span<const OseenVortex> vortices, double t, const Grid& grid) {
  VectorField u(grid);
  for (const OseenVortex& v : vortices) {
    for (int iy = 0; iy < grid.n(); ++iy)
      for (int ix = 0; ix < grid.n(); ++ix) {
        const Vec2 vel = v.velocity({grid.coord(ix), grid.coord(iy)}, t);
        u.x(ix, iy) += vel.x;
        u.y(ix, iy) += vel.y;
      }
  }
  return u;
}

double background_speed_bound(std::span<const OseenVortex> vortices, double t) {
  double s = 0.0;
  for (const OseenVortex& v : vortices) s += std::abs(v.alpha);
  return s * velocity_profile_max() / std::sqrt(t);
}

ScalarField propagate_SN(std::span<const OseenVortex> vortices, const ScalarField& f, double s, double t,
                         const StepperConfig& cfg) {
  cfg.validate();
  if (!(s > 0.0) || !(t > s)) throw DomainError("propagate_SN: need 0 < s < t");
  const double h = f.grid().spacing();
  const std::vector<OseenVortex> vs(vortices.begin(), vortices.end());
  const ExplicitTerm term = [&](const ScalarField& w, double time) {
    Spectrum n = divergence_spectrum(product(background_velocity(vs, time, w.grid()), w));
    n *= -1.0;
    return n;
  };
  Spectrum w = transform(f);
  double time = s;
  while (time < t - 1e-14 * t) {
    const double speed = background_speed_bound(vs, time);
    double dt;
    if (cfg.dt) {
      dt = *cfg.dt;
      check_cfl(dt, h, speed, "propagate_SN");
    } else {
      dt = speed > 0.0 ? *cfg.cfl * h / speed : t - time;
    }
    dt = std::min(dt, t - time);
    w = if_rk4_step(w, time, dt, term, cfg.dealias);
    time += dt;
  }
  ScalarField out = inverse_transform(w);
  require_boundary_decay(out, kMargin, "propagate_SN");
  return out;
}

double self_similar_step(const Grid& grid, const StepperConfig& cfg, double extra_speed) {
  cfg.validate();
  const double h = grid.spacing();
  const double speed = 0.25 * grid.box_size() + extra_speed;
  const double limit = std::min(h / (2.0 * speed), 4.0 * h / grid.box_size());
  if (cfg.dt) {
    if (*cfg.dt > limit) throw StabilityError("self-similar evolution: dt exceeds the drift stability bound");
    return *cfg.dt;
  }
  return std::min(*cfg.cfl / kDefaultCfl * limit, 4.0 * h / grid.box_size());
}

Trajectory evolve_S1(double alpha, const ScalarField& w0, double tau_end, const StepperConfig& cfg) {
  require_boundary_decay(w0, kMargin, "evolve_S1");
  const Grid& g = w0.grid();
  const double dt = self_similar_step(g, cfg, std::abs(alpha) * velocity_profile_max());
  const VectorField drift = self_similar_drift(g, alpha);
  const ExplicitTerm term = [&](const ScalarField& w, double) { return divergence_spectrum(product(drift, w)); };
  return march(w0, 0.0, tau_end, dt, term, cfg.dealias, cfg.sample_interval);
}

Trajectory evolve_T_alpha(double alpha, const ScalarField& w0, double tau_end, const StepperConfig& cfg) {
  require_boundary_decay(w0, kMargin, "evolve_T_alpha");
  const Grid& g = w0.grid();
  const double dt = self_similar_step(g, cfg, std::abs(alpha) * velocity_profile_max());
  const VectorField drift = self_similar_drift(g, alpha);
  VectorField grad_g(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const Vec2 d = gaussian_gradient({g.coord(ix), g.coord(iy)});
      grad_g.x(ix, iy) = d.x;
      grad_g.y(ix, iy) = d.y;
    }
  const ExplicitTerm term = [&](const ScalarField& w, double) {
    Spectrum n = divergence_spectrum(product(drift, w));
    if (alpha != 0.0) {
      const VectorField v = velocity_free_space(w);
      ScalarField coupling = -alpha * (v.x * grad_g.x + v.y * grad_g.y);
      Spectrum cs = transform(coupling);
      // The coupling integrates to zero exactly; drop its quadrature residue.
      cs.at(0, 0) = 0.0;
      n += cs;
    }
    return n;
  };
  return march(w0, 0.0, tau_end, dt, term, cfg.dealias, cfg.sample_interval);
}

}  // namespace nsm
