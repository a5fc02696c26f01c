#pragma once

#include <complex>
#include <span>

namespace nsm {

/// Real-to-complex 2D FFT on an n x n array stored row-major (row = y).
///
/// The half-spectrum has n rows and n/2 + 1 columns (the x direction is
/// halved). `forward` is unnormalized, `inverse` divides by n^2, so
/// inverse(forward(f)) == f.
///
/// Plans are created with FFTW_ESTIMATE, which keeps the transforms
/// bit-reproducible from run to run. Instances are per-thread.
class RealFft2d {
 public:
  explicit RealFft2d(int n);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  int n() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

  /// Cached transform for size n, owned by the calling thread.
  static RealFft2d& for_size(int n);

 private:
  int n_;
  double* real_buf_;
  void* complex_buf_;
  void* plan_forward_;
  void* plan_inverse_;
};

}  // namespace nsm
