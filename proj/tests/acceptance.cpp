#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "nsm/experiments.hpp"
#include "nsm/field_io.hpp"

// Runs every experiment at its pinned defaults and prints one line per
// criterion. Exit status is nonzero when any criterion fails.
int main() {
  std::map<std::string, std::vector<nsm::Check>> by_criterion;
  std::vector<std::string> order;
  std::map<std::string, std::string> errors;
  for (const nsm::Experiment& e : nsm::experiments()) {
    for (const auto& c : e.criteria) order.push_back(c);
    const auto start = std::chrono::steady_clock::now();
    try {
      for (nsm::Check& c : e.run(nsm::ExperimentOptions{})) by_criterion[c.criterion].push_back(std::move(c));
    } catch (const std::exception& ex) {
      for (const auto& c : e.criteria) errors[c] = ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "[%s: %.1f s]\n", e.name.c_str(), secs);
  }

  std::sort(order.begin(), order.end(),
            [](const std::string& a, const std::string& b) { return std::stoi(a.substr(1)) < std::stoi(b.substr(1)); });
  int failed = 0;
  for (const std::string& id : order) {
    const auto& checks = by_criterion[id];
    bool ok = !checks.empty() && !errors.count(id);
    for (const auto& c : checks) ok = ok && c.passed;
    if (!ok) ++failed;
    std::string detail;
    for (const auto& c : checks) {
      if (!detail.empty()) detail += "; ";
      detail += c.label + " = " + nsm::format_real(c.measured) + " (" + c.threshold + ")";
    }
    if (errors.count(id)) detail += (detail.empty() ? "" : "; ") + std::string("error: ") + errors[id];
    std::printf("%s %s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(order.size()) - failed, order.size());
  return failed == 0 ? 0 : 1;
}
