#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nsm/field.hpp"
#include "nsm/solver.hpp"

namespace nsm {

/// t^{1-1/p} || omega - alpha/t G(x/sqrt(t)) ||_{L^p}. DomainError for p < 1
/// or t <= 0.
double oseen_distance(const ScalarField& omega, double t, double alpha, double p);

/// Running-supremum series over the snapshots of a run: column 0 is the
/// diffuse part, columns 1..N the vortices, `total` the max over columns.
struct ContractionSeries {
  std::vector<double> t;
  /// parts[k][c]: value of column c at snapshot k.
  std::vector<std::vector<double>> parts;
  std::vector<double> total;
  /// Max over columns before taking running suprema.
  std::vector<double> raw_total;
  /// Additional running supremum of the L^1 distance (solution_distance only).
  std::vector<double> l1;

  std::size_t columns() const { return parts.empty() ? 0 : parts.front().size(); }
  /// True when every column and the total are nondecreasing in t.
  bool nondecreasing() const;
};

/// Localization weights of a decomposed run: chi_i(x) = bump(|x - z_i| / d)
/// (chi_1 = 1 when there is a single vortex) and chi_0 = 1 - sum chi_i.
std::vector<ScalarField> partition_of_unity(const std::vector<OseenVortex>& backgrounds, double separation,
                                            const Grid& grid);

/// Diffuse part omega~_0 = diffuse + chi_0 interaction at snapshot k.
ScalarField diffuse_part(const SolverRun& run, std::size_t k, const std::vector<ScalarField>& chi);

/// || w~_i ||_{L^2(m)} for the self-similar profile of f around z at time t,
/// computed on the physical grid: t int (1 + |x - z|^2/t)^m f^2 dx.
double self_similar_weighted_l2(const ScalarField& f, Point z, double t, double m);

/// M_0 = sup s^{1/4} ||omega~_0||_{4/3}, M_i = sup ||w~_i||_{L^2(m)} with
/// w~_i the profile of chi_i interaction / alpha_i. ModeError for direct runs.
ContractionSeries remainder_norms(const SolverRun& run, double m);

/// Running suprema of the same functionals applied to the difference of two
/// runs, plus the L^1 distance of the total vorticities. Grids must share L;
/// a finer grid (integer multiple of n) is subsampled onto the coarser one.
/// MismatchError when snapshot times, centers or boxes differ.
ContractionSeries solution_distance(const SolverRun& a, const SolverRun& b, double m);

/// t^{1-1/p} ||omega~_0 chi||_{L^p} and t^{1/2-1/q} ||u~_0 chi||_{L^q} with
/// chi = exp(-|x - z_i|^2 / (8t)), u~_0 the free-space velocity of omega~_0.
struct LocalizedSeries {
  std::vector<double> t;
  std::vector<double> vorticity;
  std::vector<double> velocity;
};

LocalizedSeries localized_diffuse_norm(const SolverRun& run, std::size_t vortex, double p, double q);

/// The two localized norms above for a single field w0 at time t around z.
std::pair<double, double> localized_norms(const ScalarField& w0, Point z, double t, double p, double q);

// ---------------------------------------------------------------------------
// Output.

struct OseenDistanceRow {
  double t = 0.0;
  double p = 0.0;
  double value = 0.0;
};

void write_oseen_distance_csv(const std::filesystem::path& path, const std::vector<OseenDistanceRow>& rows);
/// Columns t, <prefix>0..<prefix>N, <prefix>.
void write_contraction_csv(const std::filesystem::path& path, const ContractionSeries& series,
                           const std::string& prefix);
/// Plain-text gnuplot script plotting columns 2.. of `csv` against column 1.
void write_gnuplot_script(const std::filesystem::path& path, const std::filesystem::path& csv,
                          const std::string& title, bool log_axes);

}  // namespace nsm
