#include "wfr/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wfr::fft {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealTransform::RealTransform(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealTransform: size must be >= 2");
  real_ = fftw_alloc_real(n_);
  complex_ = reinterpret_cast<std::complex<double>*>(
      fftw_alloc_complex(spectrum_size()));
  if (real_ == nullptr || complex_ == nullptr) {
    throw std::runtime_error("RealTransform: allocation failed");
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_1d(
      static_cast<int>(n_), real_, reinterpret_cast<fftw_complex*>(complex_),
      FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_1d(
      static_cast<int>(n_), reinterpret_cast<fftw_complex*>(complex_), real_,
      FFTW_ESTIMATE);
  if (plan_fwd_ == nullptr || plan_inv_ == nullptr) {
    throw std::runtime_error("RealTransform: planning failed");
  }
}

RealTransform::~RealTransform() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  }
  fftw_free(real_);
  fftw_free(complex_);
}

void RealTransform::forward() {
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void RealTransform::inverse() {
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
}

std::vector<double> real_dft_magnitude(const double* data, std::size_t n) {
  RealTransform transform(n);
  for (std::size_t i = 0; i < n; ++i) transform.real_data()[i] = data[i];
  transform.forward();
  std::vector<double> magnitude(transform.spectrum_size());
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    magnitude[k] = std::abs(transform.complex_data()[k]);
  }
  return magnitude;
}

}  // namespace wfr::fft
