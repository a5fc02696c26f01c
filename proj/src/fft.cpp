#include "nsm/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nsm {
namespace {

// The FFTW planner is not thread-safe; execution with distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft2d::RealFft2d(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("RealFft2d: n must be even");
  const auto nn = static_cast<std::size_t>(n) * n;
  real_buf_ = fftw_alloc_real(nn);
  auto* cbuf = fftw_alloc_complex(spectral_size());
  complex_buf_ = cbuf;
  std::lock_guard lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_r2c_2d(n, n, real_buf_, cbuf, FFTW_ESTIMATE);
  plan_inverse_ = fftw_plan_dft_c2r_2d(n, n, cbuf, real_buf_, FFTW_ESTIMATE);
}

RealFft2d::~RealFft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

std::size_t RealFft2d::spectral_size() const {
  return static_cast<std::size_t>(n_) * static_cast<std::size_t>(half());
}

void RealFft2d::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  auto* c = reinterpret_cast<std::complex<double>*>(complex_buf_);
  std::copy(c, c + spectral_size(), out.begin());
}

void RealFft2d::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  auto* c = reinterpret_cast<std::complex<double>*>(complex_buf_);
  std::copy(in.begin(), in.end(), c);
  fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_) * n_; ++i) out[i] = real_buf_[i] * scale;
}

RealFft2d& RealFft2d::for_size(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft2d>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft2d>(n);
  return *slot;
}

}  // namespace nsm
