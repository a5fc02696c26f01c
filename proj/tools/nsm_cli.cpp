#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "nsm/config.hpp"
#include "nsm/errors.hpp"
#include "nsm/experiments.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kCriterionFailure = 3;

void print_mapping() {
  for (const nsm::Experiment& e : nsm::experiments()) {
    std::cout << e.name << ':';
    for (const auto& c : e.criteria) std::cout << ' ' << c;
    std::cout << "  " << e.summary << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure-data 2D Navier-Stokes experiments"};
  std::string subcommand;
  std::string config_path;
  bool list = false;
  std::optional<int> grid_n, basis;
  std::optional<double> box_l, t0, t_end, dt, alpha, epsilon, m;
  std::optional<long long> seed;
  std::optional<std::string> out;

  app.add_option("experiment", subcommand, "Experiment to run (see --list)");
  app.add_option("-c,--config", config_path, "Flat key = value config file");
  app.add_flag("--list", list, "Print experiments and the criteria they check");
  app.add_option("--grid-n", grid_n, "Grid points per side");
  app.add_option("--box-l", box_l, "Box side length");
  app.add_option("--t0", t0, "Initial time");
  app.add_option("--t-end", t_end, "Final time");
  app.add_option("--dt", dt, "Time step (or step cap for solver runs)");
  app.add_option("--alpha", alpha, "Vortex circulation");
  app.add_option("--epsilon", epsilon, "Atomic threshold as a fraction of the total variation");
  app.add_option("--m", m, "Weight exponent of L^2(m) norms");
  app.add_option("--basis", basis, "Hermite basis size per direction");
  app.add_option("--seed", seed, "Seed of the random test fields");
  app.add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (list) {
    print_mapping();
    return 0;
  }
  const nsm::Experiment* exp = nsm::find_experiment(subcommand);
  if (!exp) {
    std::cerr << "unknown experiment '" << subcommand << "'; use --list\n";
    return kConfigError;
  }

  nsm::ExperimentOptions opts;
  try {
    nsm::Config cfg;
    if (!config_path.empty()) cfg = nsm::Config::load(config_path);
    opts = nsm::ExperimentOptions::from_config(cfg);
  } catch (const nsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (grid_n) opts.grid_n = grid_n;
  if (box_l) opts.box_l = box_l;
  if (t0) opts.t0 = t0;
  if (t_end) opts.t_end = t_end;
  if (dt) opts.dt = dt;
  if (alpha) opts.alpha = alpha;
  if (epsilon) opts.epsilon = epsilon;
  if (m) opts.m = m;
  if (basis) opts.basis = basis;
  if (seed) opts.seed = static_cast<std::uint64_t>(*seed);
  if (out) opts.out = *out;
  if (!opts.out) opts.out = "out/" + exp->name;

  try {
    bool all = true;
    for (const nsm::Check& c : exp->run(opts)) {
      std::cout << nsm::format_check(c) << '\n';
      all = all && c.passed;
    }
    return all ? 0 : kCriterionFailure;
  } catch (const nsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nsm::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}
