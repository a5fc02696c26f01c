#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nsm/diagnostics.hpp"
#include "nsm/errors.hpp"
#include "nsm/measure.hpp"
#include "nsm/solver.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

TEST_CASE("oseen_distance") {
  const Grid g(256, 40.0);
  const double t = 2.0;
  const ScalarField w = oseen_fields({1.0, {}}, t, g).first;
  CHECK(oseen_distance(w, t, 1.0, 1.0) < 1e-10);
  CHECK(oseen_distance(2.0 * w, t, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  // (1/t)(G + 0.1 d1 G)(x / sqrt t) sits at distance 0.1 ||d1 G||_2 for p = 2.
  const double s = std::sqrt(t);
  const ScalarField pert = ScalarField::sample(g, [&](double x, double y) {
    return (gaussian_profile({x / s, y / s}) + 0.1 * gaussian_gradient({x / s, y / s}).x) / t;
  });
  const double d1_norm = lp_norm(d1_gaussian(g), 2.0);
  CHECK(oseen_distance(pert, t, 1.0, 2.0) == doctest::Approx(0.1 * d1_norm).epsilon(1e-8));
}

TEST_CASE("partition of unity sums to one") {
  const Grid g(128, 16.0);
  const std::vector<OseenVortex> bg{{1.0, {0, 0}}, {1.0, {4, 0}}};
  const auto chi = partition_of_unity(bg, 4.0, g);
  REQUIRE(chi.size() == 3);
  ScalarField sum = chi[0] + chi[1] + chi[2];
  for (double v : sum.values()) CHECK(v == doctest::Approx(1.0));
  for (double v : chi[0].values()) CHECK(v >= -1e-15);
}

TEST_CASE("remainder norms") {
  SolverConfig cfg;
  cfg.grid = Grid(256, 16.0);
  cfg.t0 = 1e-2;
  cfg.t_end = 1e-1;
  const SolverRun atom = solve_cauchy(FiniteMeasure({{{0, 0}, 1.0}}), 0.05, cfg);
  const ContractionSeries s = remainder_norms(atom, 3.0);
  CHECK(s.columns() == 2);
  for (double v : s.total) CHECK(v < 1e-6);

  const SolverRun dens = solve_cauchy(FiniteMeasure({}, blob(cfg.grid, {0.0, 0.0}, 0.1, 0.5)), 0.05, cfg);
  const ContractionSeries sd = remainder_norms(dens, 3.0);
  CHECK(sd.columns() == 1);
  for (std::size_t k = 0; k < sd.t.size(); ++k) CHECK(sd.total[k] == sd.parts[k][0]);
  CHECK(sd.nondecreasing());

  SolverConfig direct = cfg;
  direct.mode = SolverMode::Direct;
  direct.t0 = 0.5;
  direct.t_end = 0.6;
  CHECK_THROWS_AS(remainder_norms(solve_cauchy(FiniteMeasure({{{0, 0}, 1.0}}), 0.05, direct), 3.0), ModeError);
}

TEST_CASE("remainder norms stay small for a vortex plus a weak density") {
  SolverConfig cfg;
  cfg.grid = Grid(512, 16.0);
  cfg.t0 = 1e-2;
  cfg.t_end = 1e-1;
  const FiniteMeasure mu({{{0, 0}, 1.0}}, blob(cfg.grid, {1.5, 0.0}, 0.05, 0.5));
  const ContractionSeries s = remainder_norms(solve_cauchy(mu, 0.1, cfg), 3.0);
  for (double v : s.total) CHECK(v <= 0.2);
  CHECK(s.nondecreasing());
}

TEST_CASE("solution distance") {
  SolverConfig cfg;
  cfg.grid = Grid(128, 20.0);
  cfg.t0 = 0.2;
  cfg.t_end = 0.3;
  const FiniteMeasure mu({{{0, 0}, 1.0}}, blob(cfg.grid, {2.0, 0.0}, 0.1, 0.5));
  const SolverRun a = solve_cauchy(mu, 0.05, cfg);
  const ContractionSeries same = solution_distance(a, a, 3.0);
  for (double v : same.total) CHECK(v == 0.0);

  SolverConfig half = cfg;
  half.dt_scale = 0.5;
  SolverConfig quarter = cfg;
  quarter.dt_scale = 0.25;
  const SolverRun b = solve_cauchy(mu, 0.05, half);
  const SolverRun c = solve_cauchy(mu, 0.05, quarter);
  const double d_ab = solution_distance(a, b, 3.0).total.back();
  const double d_bc = solution_distance(b, c, 3.0).total.back();
  // Richardson: the halving error is the larger part of the full-step error.
  CHECK(d_ab < 10.0 * (d_ab - d_bc) + 1e-14);

  SolverConfig other = cfg;
  other.grid = Grid(96, 20.0);
  CHECK_THROWS_AS(solution_distance(a, solve_cauchy(mu, 0.05, other), 3.0), MismatchError);
}

TEST_CASE("localized norms vanish without a diffuse part") {
  const Grid g(128, 16.0);
  const auto [w, u] = localized_norms(ScalarField(g), {}, 0.1, 4.0, 4.0);
  CHECK(w == 0.0);
  CHECK(u == 0.0);
  const auto [w1, u1] = localized_norms(blob(g, {3.0, 0.0}, 0.1, 0.4), {}, 0.1, 4.0, 4.0);
  const auto [w2, u2] = localized_norms(blob(g, {3.0, 0.0}, 0.1, 0.4), {}, 0.01, 4.0, 4.0);
  CHECK(w2 < w1);
  CHECK(u2 < u1);
}

TEST_CASE("csv and gnuplot outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "nsm_diag_test";
  std::filesystem::create_directories(dir);
  write_oseen_distance_csv(dir / "d.csv", {{1.0, 2.0, 0.5}});
  std::ifstream in(dir / "d.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t,p,value");
  CHECK(row.rfind("1,2,0.5", 0) == 0);
  write_gnuplot_script(dir / "d.gp", "d.csv", "title", true);
  CHECK(std::filesystem::file_size(dir / "d.gp") > 0);
}
