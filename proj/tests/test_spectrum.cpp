#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "nsm/errors.hpp"
#include "nsm/spectrum.hpp"

using namespace nsm;

TEST_CASE("alpha = 0 gives the Hermite spectrum") {
  const SpectrumReport r = linearized_spectrum(0.0, 16, true);
  const double expected[] = {-0.5, -0.5, -1.0, -1.0, -1.0, -1.5, -1.5, -1.5, -1.5};
  for (int i = 0; i < 9; ++i) {
    CHECK(std::abs(r.eigenvalues[i].real() - expected[i]) < 1e-8);
    CHECK(std::abs(r.eigenvalues[i].imag()) < 1e-8);
  }
  CHECK(r.eigenvalues.size() == 16 * 16 - 1);
  CHECK(r.max_real() == doctest::Approx(-0.5));
}

TEST_CASE("without mean-zero projection the steady state appears") {
  const SpectrumReport r = linearized_spectrum(0.0, 16, false);
  CHECK(std::abs(r.eigenvalues.front()) < 1e-8);
}

TEST_CASE("translation and scaling modes persist for alpha > 0") {
  for (double alpha : {1.0, 10.0}) {
    const SpectrumReport r = linearized_spectrum(alpha, 24, true);
    CHECK(std::abs(r.translation + 0.5) < 1e-6);
    CHECK(r.translation_multiplicity >= 2);
    CHECK(std::abs(r.scaling + 1.0) < 1e-6);
    CHECK(r.max_real() <= -0.5 + 1e-3);
  }
  CHECK_THROWS_AS(linearized_spectrum(1.0, 8, true), DomainError);
}

TEST_CASE("spectrum csv") {
  const auto path = std::filesystem::temp_directory_path() / "nsm_spectrum.csv";
  write_spectrum_csv(path, {linearized_spectrum(1.0, 16, true)});
  std::ifstream in(path);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16 * 16 - 1);
}
