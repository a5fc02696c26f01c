#pragma once

#include <cstdint>

#include "nsm/field.hpp"

namespace nsm {

/// Counter-based 64-bit generator: output k is splitmix64(seed + k * golden).
/// Normal deviates use the Box-Muller transform on consecutive outputs.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next();
  /// Uniform on (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Smooth random field G(xi) * sum over |j|,|k| <= 2 of
/// (a_jk cos(kappa (j x + k y)) + b_jk sin(kappa (j x + k y))), kappa = 1/2,
/// with standard normal coefficients drawn from CounterRng(seed).
/// Gaussian-localized, so it meets every boundary-decay requirement once
/// L >= 20.
ScalarField random_band_limited(const Grid& grid, std::uint64_t seed);

}  // namespace nsm
