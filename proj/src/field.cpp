#include "wfr/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfr/fft.hpp"
#include "wfr/rng.hpp"
#include "wfr/weights.hpp"

namespace wfr {

namespace {

void check_geometry(const Field2D& field) {
  if (field.delta_x <= 0.0 || field.delta_t <= 0.0) {
    throw std::invalid_argument("Field2D: grid spacings must be positive");
  }
}

Eigen::Index axis_count(const Field2D& field, Axis axis) {
  return axis == Axis::x ? field.nx() : field.nt();
}

}  // namespace

double sample_stddev(const Field2D& field) {
  const Eigen::Index n = field.values.size();
  if (n < 2) {
    throw std::invalid_argument(
        "sample_stddev: need at least two samples for an n-1 estimate");
  }
  const double mean = field.values.mean();
  const double ss = (field.values.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(n - 1));
}

Field2D add_gaussian_noise(const Field2D& field, double sigma,
                           std::uint64_t seed) {
  if (sigma < 0.0) {
    throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
  }
  Field2D out = field;
  if (sigma == 0.0) return out;
  const double scale = sigma * sample_stddev(field);
  GaussianSampler gauss(seed);
  // Storage order (x fastest) so the draw sequence is part of the format.
  for (Eigen::Index it = 0; it < out.nt(); ++it) {
    for (Eigen::Index ix = 0; ix < out.nx(); ++ix) {
      out.values(ix, it) += scale * gauss.next();
    }
  }
  return out;
}

Field2D downsample(const Field2D& field, int stride_x, int stride_t) {
  check_geometry(field);
  if (stride_x < 1 || stride_t < 1) {
    throw std::invalid_argument("downsample: strides must be >= 1");
  }
  const Eigen::Index nx = (field.nx() - 1) / stride_x + 1;
  const Eigen::Index nt = (field.nt() - 1) / stride_t + 1;
  if (nx < 2 || nt < 2) {
    throw std::invalid_argument(
        "downsample: stride leaves fewer than two samples along an axis");
  }
  Field2D out;
  out.values.resize(nx, nt);
  for (Eigen::Index j = 0; j < nt; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      out.values(i, j) = field.values(i * stride_x, j * stride_t);
    }
  }
  out.delta_x = field.delta_x * stride_x;
  out.delta_t = field.delta_t * stride_t;
  out.origin_x = field.origin_x;
  out.origin_t = field.origin_t;
  return out;
}

Field2D crop_extent(const Field2D& field, double length_x, double length_t) {
  check_geometry(field);
  auto count_for = [](double length, double delta, Eigen::Index n) {
    if (length <= 0.0) return n;
    const auto keep =
        static_cast<Eigen::Index>(std::floor(length / delta + 1e-9)) + 1;
    return std::clamp<Eigen::Index>(keep, 2, n);
  };
  const Eigen::Index nx = count_for(length_x, field.delta_x, field.nx());
  const Eigen::Index nt = count_for(length_t, field.delta_t, field.nt());
  Field2D out = field;
  out.values = field.values.topLeftCorner(nx, nt).eval();
  return out;
}

namespace {

// Average |DFT| over all lines along `axis`, with no normalization applied.
std::vector<double> mean_line_magnitude(const Eigen::MatrixXd& values,
                                        Axis axis) {
  const Eigen::Index n = axis == Axis::x ? values.rows() : values.cols();
  const Eigen::Index lines = axis == Axis::x ? values.cols() : values.rows();
  fft::RealTransform transform(static_cast<std::size_t>(n));
  std::vector<double> acc(transform.spectrum_size(), 0.0);
  for (Eigen::Index line = 0; line < lines; ++line) {
    for (Eigen::Index i = 0; i < n; ++i) {
      transform.real_data()[i] =
          axis == Axis::x ? values(i, line) : values(line, i);
    }
    transform.forward();
    for (std::size_t k = 0; k < acc.size(); ++k) {
      acc[k] += std::abs(transform.complex_data()[k]);
    }
  }
  for (double& v : acc) v /= static_cast<double>(lines);
  return acc;
}

SpectrumProfile finish_profile(std::vector<double> magnitude, double extent) {
  SpectrumProfile profile;
  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  if (!(peak > 0.0)) {
    throw std::runtime_error("spectrum: field has identically zero spectrum");
  }
  profile.frequency.resize(magnitude.size());
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    profile.frequency[k] =
        2.0 * M_PI * static_cast<double>(k) / extent;
    magnitude[k] /= peak;
  }
  profile.magnitude = std::move(magnitude);
  return profile;
}

Eigen::MatrixXd windowed_block(const Field2D& field,
                               const IntegrationDomain& domain, int alpha,
                               int beta) {
  if (!domain.fits(field.grid())) {
    throw std::invalid_argument("windowed_spectrum: domain outside grid");
  }
  if (alpha < 0 || beta < 0) {
    throw std::invalid_argument("windowed_spectrum: envelope powers must be >= 0");
  }
  const Eigen::Index px = domain.npoints_x();
  const Eigen::Index pt = domain.npoints_t();
  const Poly1D env_x = Poly1D::envelope_power(alpha);
  const Poly1D env_t = Poly1D::envelope_power(beta);
  Eigen::MatrixXd block =
      field.values.block(domain.first_x(), domain.first_t(), px, pt);
  Eigen::VectorXd ex(px), et(pt);
  for (Eigen::Index i = 0; i < px; ++i) {
    ex(i) = env_x(static_cast<double>(i - domain.half_cells_x) /
                  static_cast<double>(domain.half_cells_x));
  }
  for (Eigen::Index j = 0; j < pt; ++j) {
    et(j) = env_t(static_cast<double>(j - domain.half_cells_t) /
                  static_cast<double>(domain.half_cells_t));
  }
  block.array() *= (ex * et.transpose()).array();
  return block;
}

}  // namespace

SpectrumProfile power_spectrum(const Field2D& field, Axis axis) {
  check_geometry(field);
  if (axis_count(field, axis) < 4) {
    throw std::invalid_argument("power_spectrum: need at least 4 samples");
  }
  const double extent = axis == Axis::x ? field.extent_x() : field.extent_t();
  return finish_profile(mean_line_magnitude(field.values, axis), extent);
}

SpectrumProfile windowed_spectrum(const Field2D& field,
                                  const IntegrationDomain& domain, int alpha,
                                  int beta, Axis axis) {
  check_geometry(field);
  Eigen::MatrixXd block = windowed_block(field, domain, alpha, beta);
  const Eigen::Index half =
      axis == Axis::x ? domain.half_cells_x : domain.half_cells_t;
  const double size =
      2.0 * static_cast<double>(half) *
      (axis == Axis::x ? field.delta_x : field.delta_t);
  return finish_profile(mean_line_magnitude(block, axis), size);
}

SpectrumProfile windowed_spectrum_mean(
    const Field2D& field, const std::vector<IntegrationDomain>& domains,
    int alpha, int beta, Axis axis) {
  check_geometry(field);
  if (domains.empty()) {
    throw std::invalid_argument("windowed_spectrum_mean: no domains given");
  }
  std::vector<double> acc;
  double size = 0.0;
  for (const IntegrationDomain& domain : domains) {
    Eigen::MatrixXd block = windowed_block(field, domain, alpha, beta);
    std::vector<double> mag = mean_line_magnitude(block, axis);
    if (acc.empty()) {
      acc.assign(mag.size(), 0.0);
      const Eigen::Index half =
          axis == Axis::x ? domain.half_cells_x : domain.half_cells_t;
      size = 2.0 * static_cast<double>(half) *
             (axis == Axis::x ? field.delta_x : field.delta_t);
    } else if (mag.size() != acc.size()) {
      throw std::invalid_argument(
          "windowed_spectrum_mean: domains must share one size");
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += mag[k];
  }
  for (double& v : acc) v /= static_cast<double>(domains.size());
  return finish_profile(std::move(acc), size);
}

namespace {

// Normalized autocorrelation along `axis`, lag stepped until it first drops
// below 1/e; returns the interpolated crossing in physical units.
double correlation_length(const Field2D& field, Axis axis) {
  const Eigen::Index n = axis_count(field, axis);
  const Eigen::Index lines =
      axis == Axis::x ? field.nt() : field.nx();
  const double delta = axis == Axis::x ? field.delta_x : field.delta_t;
  const double mean = field.values.mean();
  const Eigen::ArrayXXd centered = field.values.array() - mean;

  auto corr_at = [&](Eigen::Index lag) {
    double acc = 0.0;
    std::int64_t count = 0;
    for (Eigen::Index line = 0; line < lines; ++line) {
      for (Eigen::Index i = 0; i + lag < n; ++i) {
        const double a = axis == Axis::x ? centered(i, line) : centered(line, i);
        const double b = axis == Axis::x ? centered(i + lag, line)
                                         : centered(line, i + lag);
        acc += a * b;
        ++count;
      }
    }
    return acc / static_cast<double>(count);
  };

  const double c0 = corr_at(0);
  if (!(c0 > 0.0)) {
    throw std::runtime_error("correlation_scales: field is constant");
  }
  const double threshold = std::exp(-1.0);
  double prev = 1.0;
  for (Eigen::Index lag = 1; lag < n - 1; ++lag) {
    const double c = corr_at(lag) / c0;
    if (c < threshold) {
      const double frac = (prev - threshold) / (prev - c);
      return delta * (static_cast<double>(lag - 1) + frac);
    }
    prev = c;
  }
  throw std::runtime_error(
      "correlation_scales: autocorrelation never drops below 1/e along an axis");
}

}  // namespace

CorrelationScales correlation_scales(const Field2D& field) {
  check_geometry(field);
  if (field.nx() < 4 || field.nt() < 4) {
    throw std::invalid_argument("correlation_scales: need at least 4 samples per axis");
  }
  CorrelationScales scales;
  scales.length_x = correlation_length(field, Axis::x);
  scales.length_t = correlation_length(field, Axis::t);
  return scales;
}

}  // namespace wfr
