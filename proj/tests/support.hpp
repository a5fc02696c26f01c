#pragma once

#include <cmath>
#include <numbers>

#include "nsm/field.hpp"
#include "nsm/oseen.hpp"

namespace testing_support {

inline nsm::ScalarField gaussian(const nsm::Grid& g, nsm::Point z = {}) {
  return nsm::ScalarField::sample(g, [z](double x, double y) { return nsm::gaussian_profile(nsm::Point{x, y} - z); });
}

inline nsm::ScalarField d1_gaussian(const nsm::Grid& g) {
  return nsm::ScalarField::sample(g, [](double x, double y) { return nsm::gaussian_gradient({x, y}).x; });
}

inline nsm::ScalarField blob(const nsm::Grid& g, nsm::Point c, double mass, double sigma) {
  const double norm = mass / (2.0 * std::numbers::pi * sigma * sigma);
  return nsm::ScalarField::sample(g, [=](double x, double y) {
    return norm * std::exp(-(nsm::Point{x, y} - c).norm2() / (2.0 * sigma * sigma));
  });
}

inline double max_diff(const nsm::ScalarField& a, const nsm::ScalarField& b) { return (a - b).max_abs(); }

inline double rel_l2(const nsm::ScalarField& a, const nsm::ScalarField& b) {
  return nsm::lp_norm(a - b, 2.0) / nsm::lp_norm(b, 2.0);
}

}  // namespace testing_support
