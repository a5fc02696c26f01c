#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsm/field.hpp"

namespace nsm {

/// Binary field file: magic "FLD2", n as int64 LE, L as float64 LE, then n^2
/// float64 LE samples in row-major order (rows along y).
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

/// One row of a norms CSV (`t,quantity,p,m,value`).
struct NormRecord {
  double t = 0.0;
  std::string quantity;
  double p = 0.0;
  double m = 0.0;
  double value = 0.0;
};

void write_norms_csv(const std::filesystem::path& path, const std::vector<NormRecord>& rows);

/// Shortest round-trip decimal representation, used by every CSV writer.
std::string format_real(double v);

}  // namespace nsm
