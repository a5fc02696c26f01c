#include <doctest.h>

#include <cmath>

#include "nsm/errors.hpp"
#include "nsm/measure.hpp"
#include "nsm/solver.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

namespace {

SolverConfig small_config(double t0, double t_end) {
  SolverConfig c;
  c.grid = Grid(256, 16.0);
  c.t0 = t0;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("initialize_from_measure") {
  const Grid g(128, 16.0);
  const VortexSystem one = initialize_from_measure(FiniteMeasure({{{0, 0}, 1.0}}), 0.1, 1e-2, g);
  REQUIRE(one.backgrounds.size() == 1);
  CHECK(one.backgrounds[0].alpha == 1.0);
  CHECK(one.remainder().max_abs() == 0.0);

  const ScalarField rho = blob(g, {1.0, 0.0}, 0.5, 0.5);
  const VortexSystem dens = initialize_from_measure(FiniteMeasure({}, rho), 0.1, 1e-2, g);
  CHECK(dens.backgrounds.empty());
  CHECK(max_diff(dens.remainder(), heat_flow(rho, 1e-2)) < 1e-15);

  const VortexSystem two = initialize_from_measure(FiniteMeasure({{{0, 0}, 1.0}, {{4, 0}, 1.0}}), 0.1, 1e-2, g);
  CHECK(two.backgrounds.size() == 2);
  CHECK(two.separation == 4.0);
  CHECK(two.remainder().max_abs() == 0.0);
  CHECK(two.circulation() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("partition bump") {
  CHECK(partition_bump(0.0) == 1.0);
  CHECK(partition_bump(0.25) == 1.0);
  CHECK(partition_bump(1.0 / 3.0) == 0.0);
  CHECK(partition_bump(1.0) == 0.0);
  const double mid = partition_bump(0.29);
  CHECK((mid > 0.0 && mid < 1.0));
}

TEST_CASE("step_decomposed with a single background stays zero") {
  const Grid g(128, 16.0);
  const VortexSystem s = initialize_from_measure(FiniteMeasure({{{0, 0}, 1.0}}), 0.1, 0.1, g);
  const VortexSystem next = step_decomposed(s, 1e-3, small_config(0.1, 0.2));
  CHECK(next.remainder().max_abs() < 1e-14);
  CHECK(next.t == doctest::Approx(0.101));
}

TEST_CASE("step_decomposed with two vortices sources the interaction at first order") {
  const Grid g(256, 16.0);
  const VortexSystem s = initialize_from_measure(FiniteMeasure({{{-2, 0}, 1.0}, {{2, 0}, 1.0}}), 0.1, 0.05, g);
  const SolverConfig cfg = small_config(0.05, 0.1);
  const double a = lp_norm(step_decomposed(s, 1e-4, cfg).remainder(), 1.0);
  const double b = lp_norm(step_decomposed(s, 2e-4, cfg).remainder(), 1.0);
  CHECK(a > 0.0);
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("decomposed step without backgrounds equals the direct step") {
  const Grid g(128, 16.0);
  const ScalarField w = blob(g, {0.5, 0.0}, 1.0, 0.7) + blob(g, {-1.0, 0.5}, -0.5, 0.6);
  const VortexSystem s({}, w, 0.5);
  const SolverConfig cfg = small_config(0.5, 1.0);
  CHECK(max_diff(step_decomposed(s, 1e-2, cfg).remainder(), step_direct(w, 0.5, 1e-2, cfg)) < 1e-12);
  CHECK(step_direct(ScalarField(g), 0.5, 1e-2, cfg).max_abs() == 0.0);
}

TEST_CASE("direct solver on the Oseen vortex") {
  SolverConfig cfg;
  cfg.grid = Grid(256, 40.0);
  cfg.t0 = 1.0;
  cfg.t_end = 2.0;
  cfg.mode = SolverMode::Direct;
  cfg.dt_max = 1e-2;
  const SolverRun run = solve_cauchy(FiniteMeasure({{{0, 0}, 1.0}}), 0.05, cfg);
  const ScalarField exact = oseen_fields({1.0, {}}, 2.0, cfg.grid).first;
  CHECK(lp_norm(run.vorticity(run.snapshots.size() - 1) - exact, 1.0) < 1e-6);
  CHECK(run.snapshots.back().t == doctest::Approx(2.0));
}

TEST_CASE("solve_cauchy on a single atom is exact") {
  const SolverRun run = solve_cauchy(FiniteMeasure({{{0, 0}, 1.0}}), 0.05, small_config(1e-2, 1e-1));
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    const Snapshot& s = run.snapshots[k];
    CHECK(lp_norm(s.diffuse + s.interaction, 1.0) < 1e-8);
  }
  CHECK(run.l1_bound_holds);
}

TEST_CASE("solve_cauchy on the zero measure") {
  const SolverRun run = solve_cauchy(FiniteMeasure{}, 0.05, small_config(1e-2, 2e-2));
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) CHECK(run.vorticity(k).max_abs() == 0.0);
}

TEST_CASE("two positive vortices keep circulation, L1 bound and positivity") {
  SolverConfig cfg = small_config(5e-2, 1e-1);
  const SolverRun run = solve_cauchy(FiniteMeasure({{{-2, 0}, 1.0}, {{2, 0}, 1.0}}), 0.1, cfg);
  for (const Snapshot& s : run.snapshots) {
    CHECK(s.circulation == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(s.l1 <= 2.0 * (1.0 + 1e-6));
    CHECK(s.min_value > -1e-10);
  }
  CHECK(run.l1_bound_holds);
}

TEST_CASE("snapshot times are geometric and end at t_end") {
  const auto ts = snapshot_times(1e-2, 1.0, 10);
  CHECK(ts.size() == 21);
  CHECK(ts.front() == 1e-2);
  CHECK(ts.back() == 1.0);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.t0 = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.t0 = 1.0;
  c.t_end = 0.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK_THROWS_AS(initialize_from_measure(FiniteMeasure({{{7.9, 0}, 1.0}}), 0.1, 1e-2, Grid(128, 16.0)), MarginError);
}
