#include "nsm/random_field.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "nsm/oseen.hpp"

namespace nsm {

std::uint64_t CounterRng::next() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ScalarField random_band_limited(const Grid& grid, std::uint64_t seed) {
  constexpr int kMax = 2;
  constexpr double kappa = 0.5;
  struct Mode {
    int j, k;
    double a, b;
  };
  CounterRng rng(seed);
  std::vector<Mode> modes;
  for (int j = -kMax; j <= kMax; ++j)
    for (int k = -kMax; k <= kMax; ++k) {
      const double a = rng.normal();
      const double b = rng.normal();
      modes.push_back({j, k, a, b});
    }
  return ScalarField::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (const Mode& m : modes) {
      const double phase = kappa * (m.j * x + m.k * y);
      s += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    return s * gaussian_profile({x, y});
  });
}

}  // namespace nsm
