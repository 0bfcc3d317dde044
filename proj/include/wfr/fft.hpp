#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wfr::fft {

// One-dimensional real<->complex DFT pair of fixed size with reusable
// buffers (FFTW backend, unnormalized).  Plan creation is serialized
// internally; execution on the owned buffers is safe from the owning thread.
class RealTransform {
 public:
  explicit RealTransform(std::size_t n);
  ~RealTransform();
  RealTransform(const RealTransform&) = delete;
  RealTransform& operator=(const RealTransform&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  double* real_data() { return real_; }
  std::complex<double>* complex_data() { return complex_; }

  void forward();  // real buffer -> complex buffer
  void inverse();  // complex buffer -> real buffer (clobbers complex buffer)

 private:
  std::size_t n_;
  double* real_ = nullptr;
  std::complex<double>* complex_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

// Magnitudes |X_k| of the DFT of a real sequence for k = 0 .. n/2.
std::vector<double> real_dft_magnitude(const double* data, std::size_t n);

}  // namespace wfr::fft
