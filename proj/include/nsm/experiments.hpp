#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsm/config.hpp"

namespace nsm {

/// One checked assertion of an experiment.
struct Check {
  std::string criterion;
  std::string label;
  bool passed = false;
  double measured = 0.0;
  /// Human-readable bound, e.g. "< 1e-06" or "in [-0.65, -0.35]".
  std::string threshold;
};

/// Overrides for an experiment; unset values take the experiment's defaults.
struct ExperimentOptions {
  std::optional<int> grid_n;
  std::optional<double> box_l;
  std::optional<double> t0;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> m;
  std::optional<int> basis;
  std::uint64_t seed = 42;
  /// Artifacts (manifest, CSVs, field dumps) go here when set.
  std::optional<std::filesystem::path> out;

  /// Reads grid_n, box_l, t0, t_end, dt, alpha, epsilon, m, basis, seed, out.
  static ExperimentOptions from_config(const Config& c);
};

struct Experiment {
  std::string name;
  std::vector<std::string> criteria;
  std::string summary;
  std::function<std::vector<Check>(const ExperimentOptions&)> run;
};

/// All experiments in criterion order.
const std::vector<Experiment>& experiments();
/// nullptr when unknown.
const Experiment* find_experiment(const std::string& name);

/// `PASS|FAIL <criterion> <measured> <threshold>` followed by the label.
std::string format_check(const Check& c);

}  // namespace nsm
