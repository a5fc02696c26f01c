#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Result {
  int status;
  std::string output;
};

Result run(const std::string& args) {
  const char* exe = std::getenv("NSM_CLI");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string(exe) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("list prints every experiment") {
  const Result r = run("--list");
  CHECK(r.status == 0);
  CHECK(r.output.find("oseen-exact: A1 A2") != std::string::npos);
  CHECK(r.output.find("biot-savart-oracle: A15") != std::string::npos);
}

TEST_CASE("missing config file exits with status 1") {
  const Result r = run("spectrum --config /nonexistent/file.cfg");
  CHECK(r.status == 1);
  CHECK(r.output.find("config") != std::string::npos);
}

TEST_CASE("unknown experiment exits with status 1") { CHECK(run("bogus").status == 1); }

TEST_CASE("spectrum writes a csv and is deterministic") {
  const auto base = std::filesystem::temp_directory_path() / "nsm_cli_test";
  std::filesystem::remove_all(base);
  const Result a = run("spectrum --alpha 1 --basis 32 --out " + (base / "a").string());
  CHECK(a.status == 0);
  CHECK(a.output.find("PASS A9") != std::string::npos);
  const std::string csv = slurp(base / "a" / "spectrum.csv");
  int rows = 0;
  for (char ch : csv) rows += ch == '\n';
  CHECK(rows > 100);
  CHECK(std::filesystem::exists(base / "a" / "manifest.txt"));
  run("spectrum --alpha 1 --basis 32 --out " + (base / "b").string());
  CHECK(slurp(base / "b" / "spectrum.csv") == csv);
}

TEST_CASE("config file options are applied") {
  const auto base = std::filesystem::temp_directory_path() / "nsm_cli_cfg";
  std::filesystem::create_directories(base);
  std::ofstream(base / "run.cfg") << "grid_n = 128\nbox_l = 40\nout = " << (base / "out").string() << "\n";
  const Result r = run("biot-savart-oracle --config " + (base / "run.cfg").string());
  CHECK(r.output.find("A15") != std::string::npos);
  CHECK(slurp(base / "out" / "manifest.txt").find("grid_n = 128") != std::string::npos);
}
