#include "nsm/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nsm/errors.hpp"

namespace nsm {
namespace {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

constexpr char kMagic[4] = {'F', 'L', 'D', '2'};

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ConfigError("truncated field file: " + path.string());
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open field file for writing: " + path.string());
  out.write(kMagic, 4);
  put<std::int64_t>(out, f.grid().n());
  put<double>(out, f.grid().box_size());
  for (double v : f.values()) put<double>(out, v);
  if (!out) throw ConfigError("write failed: " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open field file: " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("bad field magic: " + path.string());
  const auto n = get<std::int64_t>(in, path);
  const auto box = get<double>(in, path);
  if (n < 16 || n > (1 << 16)) throw ConfigError("bad field size in " + path.string());
  Grid grid(static_cast<int>(n), box);
  std::vector<double> values(grid.size());
  for (double& v : values) v = get<double>(in, path);
  return ScalarField(grid, std::move(values));
}

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void write_norms_csv(const std::filesystem::path& path, const std::vector<NormRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string());
  out << "t,quantity,p,m,value\n";
  for (const auto& r : rows) {
    out << format_real(r.t) << ',' << r.quantity << ',' << format_real(r.p) << ',' << format_real(r.m) << ','
        << format_real(r.value) << '\n';
  }
}

}  // namespace nsm
