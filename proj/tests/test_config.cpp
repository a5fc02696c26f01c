#include <doctest.h>

#include <sstream>

#include "nsm/config.hpp"
#include "nsm/errors.hpp"
#include "nsm/experiments.hpp"

using namespace nsm;

TEST_CASE("config parsing") {
  std::istringstream in("# comment\ngrid_n = 128\nbox_l=20.5\n\nout = results/run 1\n");
  const Config c = Config::parse(in);
  CHECK(c.get_int("grid_n") == 128);
  CHECK(c.get_double("box_l") == 20.5);
  CHECK(c.get("out") == std::string("results/run 1"));
  CHECK_FALSE(c.has("seed"));
  CHECK_FALSE(c.get_double("seed").has_value());
}

TEST_CASE("config errors") {
  std::istringstream bad("grid_n 128\n");
  CHECK_THROWS_AS(Config::parse(bad), ConfigError);
  std::istringstream bad_num("grid_n = 12x\n");
  const Config c = Config::parse(bad_num);
  CHECK_THROWS_AS(c.get_int("grid_n"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("experiment options from config") {
  std::istringstream in("grid_n = 64\nalpha = 2\nseed = 7\nbasis = 20\n");
  const ExperimentOptions o = ExperimentOptions::from_config(Config::parse(in));
  CHECK(o.grid_n == 64);
  CHECK(o.alpha == 2.0);
  CHECK(o.seed == 7u);
  CHECK(o.basis == 20);
  CHECK_FALSE(o.t0.has_value());
}

TEST_CASE("experiment registry") {
  CHECK(experiments().size() == 13);
  REQUIRE(find_experiment("spectrum"));
  CHECK(find_experiment("spectrum")->criteria == std::vector<std::string>{"A9"});
  CHECK(find_experiment("nope") == nullptr);
  const Check c{"A1", "label", true, 0.5, "< 1"};
  CHECK(format_check(c).rfind("PASS A1 0.5 < 1", 0) == 0);
}
