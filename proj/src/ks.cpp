#include "wfr/ks.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "wfr/fft.hpp"
#include "wfr/rng.hpp"

namespace wfr {

double linear_growth_rate(double kappa) {
  const double k2 = kappa * kappa;
  return k2 - k2 * k2;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Etdrk4Coefficients {
  std::vector<double> E, E2, Q, f1, f2, f3;
};

// Stage coefficients of the Cox-Matthews ETDRK4 scheme.  The phi-like
// functions are evaluated as means over a unit circle of contour points
// around each z = dt * L(k), which is accurate for both small and very
// negative z (the standard trick for stiff diagonal problems).
Etdrk4Coefficients etdrk4_coefficients(const std::vector<double>& lin,
                                       double dt) {
  constexpr int kContourPoints = 32;
  const std::size_t nk = lin.size();
  Etdrk4Coefficients c;
  c.E.resize(nk);
  c.E2.resize(nk);
  c.Q.assign(nk, 0.0);
  c.f1.assign(nk, 0.0);
  c.f2.assign(nk, 0.0);
  c.f3.assign(nk, 0.0);
  for (std::size_t j = 0; j < nk; ++j) {
    const double z = dt * lin[j];
    c.E[j] = std::exp(z);
    c.E2[j] = std::exp(0.5 * z);
    for (int m = 0; m < kContourPoints; ++m) {
      const double angle = kPi * (static_cast<double>(m) + 0.5) /
                           static_cast<double>(kContourPoints);
      const std::complex<double> zeta =
          z + std::complex<double>(std::cos(angle), std::sin(angle));
      const std::complex<double> ez = std::exp(zeta);
      const std::complex<double> z2 = zeta * zeta;
      const std::complex<double> z3 = z2 * zeta;
      // Upper semicircle only: the conjugate points contribute the complex
      // conjugate, so the full-circle mean is the real part.
      c.Q[j] += ((std::exp(0.5 * zeta) - 1.0) / zeta).real();
      c.f1[j] += ((-4.0 - zeta + ez * (4.0 - 3.0 * zeta + z2)) / z3).real();
      c.f2[j] += ((2.0 + zeta + ez * (-2.0 + zeta)) / z3).real();
      c.f3[j] += ((-4.0 - 3.0 * zeta - z2 + ez * (4.0 - zeta)) / z3).real();
    }
    const double scale = dt / static_cast<double>(kContourPoints);
    c.Q[j] *= scale;
    c.f1[j] *= scale;
    c.f2[j] *= scale;
    c.f3[j] *= scale;
  }
  return c;
}

std::int64_t checked_steps(double span, double dt, const char* what) {
  const double raw = span / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(raw));
  if (steps < 0 || std::abs(raw - static_cast<double>(steps)) > 1e-9 * std::max(1.0, raw)) {
    throw std::invalid_argument(std::string("simulate_ks: ") + what +
                                " must be an integer number of time steps");
  }
  return steps;
}

std::vector<double> seeded_initial_profile(const SimulationConfig& config) {
  std::mt19937_64 engine(mix_seed(config.seed, 0x6b73ULL));
  std::vector<double> u0(static_cast<std::size_t>(config.n_x), 0.0);
  for (int mode = 1; mode <= 4; ++mode) {
    const double amplitude =
        (0.15 + 0.3 * uniform_unit(engine)) *
        (uniform_unit(engine) < 0.5 ? -1.0 : 1.0);
    const double phase = 2.0 * kPi * uniform_unit(engine);
    for (int i = 0; i < config.n_x; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(config.n_x);
      u0[static_cast<std::size_t>(i)] +=
          amplitude * std::cos(2.0 * kPi * static_cast<double>(mode) * x + phase);
    }
  }
  return u0;
}

}  // namespace

Field2D simulate_ks(const SimulationConfig& config) {
  if (config.length_x <= 0.0) {
    throw std::invalid_argument("simulate_ks: length_x must be positive");
  }
  if (config.n_x < 16) {
    throw std::invalid_argument("simulate_ks: need at least 16 grid points");
  }
  if (config.dt <= 0.0 || config.duration <= 0.0 ||
      config.transient_time < 0.0) {
    throw std::invalid_argument("simulate_ks: time parameters must be positive");
  }
  if (config.save_stride < 1) {
    throw std::invalid_argument("simulate_ks: save_stride must be >= 1");
  }
  const std::int64_t steps = checked_steps(config.duration, config.dt, "duration");
  const std::int64_t transient_steps =
      checked_steps(config.transient_time, config.dt, "transient_time");
  if (steps % config.save_stride != 0) {
    throw std::invalid_argument(
        "simulate_ks: duration must be a whole number of save intervals");
  }
  if (!config.initial_profile.empty() &&
      config.initial_profile.size() != static_cast<std::size_t>(config.n_x)) {
    throw std::invalid_argument(
        "simulate_ks: initial_profile size must equal n_x");
  }

  const std::size_t n = static_cast<std::size_t>(config.n_x);
  fft::RealTransform transform(n);
  const std::size_t nk = transform.spectrum_size();

  std::vector<double> wavenumber(nk), lin(nk);
  for (std::size_t j = 0; j < nk; ++j) {
    wavenumber[j] = 2.0 * kPi * static_cast<double>(j) / config.length_x;
    lin[j] = linear_growth_rate(wavenumber[j]);
  }
  // 2/3-rule dealiasing mask for the quadratic nonlinearity.
  const std::size_t cutoff = n / 3;
  const Etdrk4Coefficients coef = etdrk4_coefficients(lin, config.dt);

  // Initial spectrum.
  const std::vector<double> u0 = config.initial_profile.empty()
                                     ? seeded_initial_profile(config)
                                     : config.initial_profile;
  for (std::size_t i = 0; i < n; ++i) transform.real_data()[i] = u0[i];
  transform.forward();
  std::vector<std::complex<double>> v(nk);
  for (std::size_t j = 0; j < nk; ++j) v[j] = transform.complex_data()[j];
  for (std::size_t j = cutoff + 1; j < nk; ++j) v[j] = 0.0;

  // N(v) = -i k/2 * FFT((IFFT v)^2), dealiased.
  const double inv_n = 1.0 / static_cast<double>(n);
  auto nonlinear = [&](const std::vector<std::complex<double>>& spec,
                       std::vector<std::complex<double>>& out) {
    for (std::size_t j = 0; j < nk; ++j) transform.complex_data()[j] = spec[j];
    transform.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = transform.real_data()[i] * inv_n;
      transform.real_data()[i] = u * u;
    }
    transform.forward();
    for (std::size_t j = 0; j < nk; ++j) {
      if (j > cutoff) {
        out[j] = 0.0;
      } else {
        const std::complex<double> w = transform.complex_data()[j];
        out[j] = std::complex<double>(0.5 * wavenumber[j] * w.imag(),
                                      -0.5 * wavenumber[j] * w.real());
      }
    }
  };

  const std::int64_t total_steps = transient_steps + steps;
  const Eigen::Index n_saved =
      static_cast<Eigen::Index>(steps / config.save_stride) + 1;
  Field2D field;
  field.values.resize(static_cast<Eigen::Index>(n), n_saved);
  field.delta_x = config.length_x / static_cast<double>(config.n_x);
  field.delta_t = config.dt * static_cast<double>(config.save_stride);
  field.origin_x = 0.0;
  field.origin_t = 0.0;

  auto record = [&](Eigen::Index slot) {
    for (std::size_t j = 0; j < nk; ++j) transform.complex_data()[j] = v[j];
    transform.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      field.values(static_cast<Eigen::Index>(i), slot) =
          transform.real_data()[i] * inv_n;
    }
  };

  std::vector<std::complex<double>> nv(nk), na(nk), nb(nk), nc(nk), a(nk),
      b(nk), cst(nk);
  Eigen::Index slot = 0;
  if (transient_steps == 0) record(slot++);
  for (std::int64_t step = 1; step <= total_steps; ++step) {
    nonlinear(v, nv);
    for (std::size_t j = 0; j < nk; ++j) {
      a[j] = coef.E2[j] * v[j] + coef.Q[j] * nv[j];
    }
    nonlinear(a, na);
    for (std::size_t j = 0; j < nk; ++j) {
      b[j] = coef.E2[j] * v[j] + coef.Q[j] * na[j];
    }
    nonlinear(b, nb);
    for (std::size_t j = 0; j < nk; ++j) {
      cst[j] = coef.E2[j] * a[j] + coef.Q[j] * (2.0 * nb[j] - nv[j]);
    }
    nonlinear(cst, nc);
    for (std::size_t j = 0; j < nk; ++j) {
      v[j] = coef.E[j] * v[j] + coef.f1[j] * nv[j] +
             2.0 * coef.f2[j] * (na[j] + nb[j]) + coef.f3[j] * nc[j];
    }
    for (std::size_t j = 0; j < nk; ++j) {
      if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag())) {
        throw std::runtime_error(
            "simulate_ks: solution blew up at step " + std::to_string(step) +
            " (t = " + std::to_string(static_cast<double>(step) * config.dt) +
            " incl. transient)");
      }
    }
    const std::int64_t recorded = step - transient_steps;
    if (recorded >= 0 && recorded % config.save_stride == 0) {
      record(slot++);
    }
  }
  return field;
}

}  // namespace wfr
