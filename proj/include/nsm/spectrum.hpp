#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace nsm {

/// Eigenvalues of the linearization at alpha G,
///   Lambda_alpha w = L w - alpha (v^G . grad w + v^w . grad G),
/// in the Galerkin basis phi_jk = d1^j d2^k G / sqrt(j! k! / 2^{j+k}),
/// 0 <= j, k < basis_n, which is orthonormal for <f, g> = int f g / G.
struct SpectrumReport {
  double alpha = 0.0;
  int basis_n = 0;
  bool mean_zero = true;
  /// Sorted by descending real part (then descending imaginary part).
  std::vector<std::complex<double>> eigenvalues;
  /// "translation", "scaling" or empty, parallel to `eigenvalues`.
  std::vector<std::string> labels;
  /// Eigenvalue nearest -1/2 and the number of eigenvalues within 1e-6 of it.
  std::complex<double> translation;
  int translation_multiplicity = 0;
  /// Fraction of the translation eigenvector's norm in span{d1 G, d2 G}.
  double translation_correlation = 0.0;
  /// Eigenvalue nearest -1.
  std::complex<double> scaling;

  double max_real() const;
};

/// basis_n >= 16 (DomainError otherwise). The alpha-independent coupling
/// matrix is assembled once per basis size by grid quadrature, with v^w from
/// the free-space Biot-Savart law. ConvergenceError if the QR iteration fails.
SpectrumReport linearized_spectrum(double alpha, int basis_n, bool mean_zero);

/// Columns alpha,re,im,label.
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumReport>& reports);

}  // namespace nsm
