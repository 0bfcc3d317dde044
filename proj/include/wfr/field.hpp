#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wfr/domain.hpp"

namespace wfr {

// Uniformly gridded scalar field u(x, t).
//
// values(ix, it) holds the sample at x = origin_x + ix * delta_x,
// t = origin_t + it * delta_t.  The physical extents reported by extent_x()
// and extent_t() span the stored samples, i.e. (n - 1) * delta.
struct Field2D {
  Eigen::MatrixXd values;  // n_x rows, n_t columns
  double delta_x = 1.0;
  double delta_t = 1.0;
  double origin_x = 0.0;
  double origin_t = 0.0;

  Eigen::Index nx() const { return values.rows(); }
  Eigen::Index nt() const { return values.cols(); }
  double extent_x() const { return delta_x * static_cast<double>(nx() - 1); }
  double extent_t() const { return delta_t * static_cast<double>(nt() - 1); }
  double x(Eigen::Index ix) const {
    return origin_x + delta_x * static_cast<double>(ix);
  }
  double t(Eigen::Index it) const {
    return origin_t + delta_t * static_cast<double>(it);
  }
  GridShape grid() const { return GridShape{nx(), nt()}; }
};

enum class Axis { x, t };

// One-sided spectrum profile: magnitudes over non-negative frequencies,
// normalized so the largest entry equals 1.
struct SpectrumProfile {
  std::vector<double> frequency;  // ascending, frequency[0] == 0
  std::vector<double> magnitude;  // same length, max == 1
};

struct CorrelationScales {
  double length_x = 0.0;
  double length_t = 0.0;
};

// Sample standard deviation (n-1 denominator) over all grid values.
// Throws std::invalid_argument if the field holds fewer than two values.
double sample_stddev(const Field2D& field);

// Returns a copy of `field` with i.i.d. N(0, (sigma * s_u)^2) noise added to
// every sample, where s_u = sample_stddev(field).  Draws are taken in storage
// order (x fastest), fully determined by `seed`.  sigma == 0 returns the
// field unchanged.  Throws std::invalid_argument for sigma < 0.
Field2D add_gaussian_noise(const Field2D& field, double sigma,
                           std::uint64_t seed);

// Keeps every stride-th sample along each axis starting at index 0 and
// rescales delta_x / delta_t accordingly.  Throws std::invalid_argument for
// strides < 1 or if fewer than two samples would remain along an axis.
Field2D downsample(const Field2D& field, int stride_x, int stride_t);

// Truncates the field to the leading samples spanning at most the requested
// physical lengths (a non-positive length keeps the full axis).  Helper for
// data-extent sweeps; at least two samples are always kept.
Field2D crop_extent(const Field2D& field, double length_x, double length_t);

// Magnitude spectrum along one axis, averaged over all lines of the other
// axis.  Frequencies are reported as 2*pi*k / extent along the chosen axis.
// Throws std::invalid_argument if the axis has fewer than 4 samples.
SpectrumProfile power_spectrum(const Field2D& field, Axis axis);

// Spectrum of the field restricted to `domain` and multiplied by the
// polynomial window (x_bar^2-1)^alpha (t_bar^2-1)^beta, averaged over the
// transverse direction.  Frequencies are reported as 2*pi*l / F where F is
// the physical domain size along the chosen axis.
SpectrumProfile windowed_spectrum(const Field2D& field,
                                  const IntegrationDomain& domain, int alpha,
                                  int beta, Axis axis);

// Same as windowed_spectrum but averaging raw magnitudes over many domains
// before normalizing; used to characterize what the weak-form inner products
// actually sample.
SpectrumProfile windowed_spectrum_mean(const Field2D& field,
                                       const std::vector<IntegrationDomain>& domains,
                                       int alpha, int beta, Axis axis);

// Correlation lengths along x and t: the lag at which the normalized
// autocorrelation (mean removed, averaged over the transverse axis) first
// drops below 1/e, linearly interpolated between grid lags.  Throws
// std::runtime_error if an axis never decorrelates below 1/e.
CorrelationScales correlation_scales(const Field2D& field);

}  // namespace wfr
