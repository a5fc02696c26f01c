#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "nsm/field.hpp"
#include "nsm/geometry.hpp"

namespace nsm {

/// Point circulation: mass `mass` concentrated at `position`.
struct Atom {
  Point position;
  double mass = 0.0;
};

/// Finite signed measure on the plane: finitely many atoms plus an optional
/// absolutely continuous part sampled on a grid.
///
/// Measures with infinitely many atoms must be truncated by the caller below
/// 1e-14 of their total variation before construction.
///
/// Atoms are kept sorted by descending |mass|, ties broken lexicographically by
/// (x, y). Zero-mass atoms are dropped; coincident positions are rejected.
class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  explicit FiniteMeasure(std::vector<Atom> atoms, std::optional<ScalarField> density = std::nullopt);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<ScalarField>& density() const { return density_; }
  /// mu(R^2): sum of atom masses plus the integral of the density.
  double total_mass() const;

 private:
  std::vector<Atom> atoms_;
  std::optional<ScalarField> density_;
};

/// Split mu = sum_i alpha_i delta_{z_i} + mu_0 with ||mu_0||_pp <= epsilon.
struct AtomicDecomposition {
  std::vector<Atom> retained;
  FiniteMeasure remainder;
  double epsilon = 0.0;
  /// Sum of |alpha_i| over retained atoms.
  double atomic_mass = 0.0;
  /// Minimum pairwise distance of retained atoms; +inf when fewer than two.
  double min_separation = 0.0;
};

/// Sum of |mass| over atoms plus L^1 norm of the density.
double total_variation(const FiniteMeasure& mu);
/// Sum of |mass| over atoms; ignores the density.
double atomic_norm(const FiniteMeasure& mu);

/// Retains the shortest prefix of the sorted atom list whose complement has
/// atomic mass <= epsilon.
AtomicDecomposition decompose(const FiniteMeasure& mu, double epsilon);

/// Samples e^{t Delta} mu on `grid`: exact heat kernels for the atoms, spectral
/// heat flow for the density. Throws MarginError when an atom lies within
/// 6 sqrt(t) of the box boundary.
ScalarField heat_smooth(const FiniteMeasure& mu, double t, const Grid& grid);

/// Plain-text measure file:
///   measure v1
///   atom <x> <y> <mass>
///   density <path-to-field-file>     (optional, relative to the measure file)
FiniteMeasure read_measure(const std::filesystem::path& path);
void write_measure(const std::filesystem::path& path, const FiniteMeasure& mu,
                   const std::filesystem::path& density_file = {});

}  // namespace nsm
