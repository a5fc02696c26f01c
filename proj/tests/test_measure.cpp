#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nsm/errors.hpp"
#include "nsm/measure.hpp"
#include "support.hpp"

using namespace nsm;
using namespace testing_support;

TEST_CASE("total_variation adds atoms and density") {
  const Grid g(128, 20.0);
  const FiniteMeasure mu({{{0, 0}, 2.0}, {{1, 0}, -3.0}}, gaussian(g));
  CHECK(total_variation(mu) == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(total_variation(FiniteMeasure{}) == 0.0);
  CHECK(total_variation(FiniteMeasure({{{0, 0}, 1.0}})) == 1.0);
}

TEST_CASE("atomic_norm ignores the density") {
  const Grid g(64, 20.0);
  CHECK(atomic_norm(FiniteMeasure({{{0, 0}, 2.0}, {{1, 0}, -3.0}}, gaussian(g))) == 5.0);
  CHECK(atomic_norm(FiniteMeasure({}, gaussian(g))) == 0.0);
  CHECK(atomic_norm(FiniteMeasure({{{0, 0}, 0.5}, {{1, 0}, 0.25}, {{2, 0}, 0.125}})) == 0.875);
}

TEST_CASE("atoms are sorted by descending mass and validated") {
  const FiniteMeasure mu({{{1, 0}, 0.5}, {{0, 0}, -2.0}, {{2, 0}, 0.0}});
  REQUIRE(mu.atoms().size() == 2);
  CHECK(mu.atoms()[0].mass == -2.0);
  CHECK_THROWS_AS(FiniteMeasure({{{0, 0}, 1.0}, {{0, 0}, 2.0}}), DomainError);
  CHECK_THROWS_AS(FiniteMeasure({{{0, 0}, std::nan("")}}), DomainError);
}

TEST_CASE("decompose keeps the shortest prefix above epsilon") {
  std::vector<Atom> atoms;
  for (int k = 0; k < 30; ++k) atoms.push_back({{double(k), 0.0}, std::pow(0.5, k + 1)});
  const auto d = decompose(FiniteMeasure(atoms), 0.3);
  CHECK(d.retained.size() == 2);
  CHECK(atomic_norm(d.remainder) <= 0.3);
  CHECK(d.min_separation == 1.0);

  const auto single = decompose(FiniteMeasure({{{0, 0}, 5.0}}), 0.1);
  REQUIRE(single.retained.size() == 1);
  CHECK(single.retained[0].mass == 5.0);
  CHECK(atomic_norm(single.remainder) == 0.0);
  CHECK(std::isinf(single.min_separation));

  const Grid g(64, 20.0);
  const auto dens = decompose(FiniteMeasure({}, gaussian(g)), 0.5);
  CHECK(dens.retained.empty());
  CHECK(dens.remainder.density().has_value());
  CHECK_THROWS_AS(decompose(FiniteMeasure{}, 0.0), DomainError);
}

TEST_CASE("heat_smooth of an atom is the heat kernel") {
  const Grid g(256, 40.0);
  const ScalarField f = heat_smooth(FiniteMeasure({{{0, 0}, 1.0}}), 1.0, g);
  CHECK(f(128, 128) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(heat_smooth(FiniteMeasure{}, 1.0, g).max_abs() == 0.0);
  const ScalarField f3 = heat_smooth(FiniteMeasure({{{0, 0}, 3.0}}), 1.0, g);
  CHECK(max_diff(f3, 3.0 * f) < 1e-15);
  CHECK_THROWS_AS(heat_smooth(FiniteMeasure({{{19, 0}, 1.0}}), 1.0, g), MarginError);
  CHECK_THROWS_AS(heat_smooth(FiniteMeasure{}, 0.0, g), DomainError);
}

TEST_CASE("measure files round-trip") {
  const Grid g(32, 10.0);
  const auto dir = std::filesystem::temp_directory_path() / "nsm_measure_test";
  std::filesystem::create_directories(dir);
  const FiniteMeasure mu({{{0.5, -1.25}, 2.0}, {{1, 0}, -0.1}}, gaussian(g));
  write_measure(dir / "mu.txt", mu);
  const FiniteMeasure back = read_measure(dir / "mu.txt");
  REQUIRE(back.atoms().size() == 2);
  CHECK(back.atoms()[0].position == Point{0.5, -1.25});
  CHECK(back.atoms()[1].mass == -0.1);
  REQUIRE(back.density());
  CHECK(max_diff(*back.density(), *mu.density()) == 0.0);
  CHECK_THROWS_AS(read_measure(dir / "missing.txt"), ConfigError);
}
