#include "wfr/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wfr {

namespace {

double binomial(int n, int k) {
  double value = 1.0;
  for (int i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(value);
}

// a + scale * b
Poly1D poly_axpy(const Poly1D& a, double scale, const Poly1D& b) {
  std::vector<double> out(
      std::max(a.coeffs().size(), b.coeffs().size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) {
    out[i] += scale * b.coeffs()[i];
  }
  return Poly1D(std::move(out));
}

// k-th derivative of cos(q s) or sin(q s) divided by q^k, given
// c = cos(q s), sn = sin(q s): the four-step sign/phase cycle.
double trig_cycle(Parity parity, int k, double c, double sn) {
  const int phase = k % 4;
  if (parity == Parity::cos) {
    switch (phase) {
      case 0: return c;
      case 1: return -sn;
      case 2: return -c;
      default: return sn;
    }
  }
  switch (phase) {
    case 0: return sn;
    case 1: return c;
    case 2: return -sn;
    default: return -c;
  }
}

}  // namespace

Poly1D::Poly1D(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Poly1D Poly1D::envelope_power(int alpha) {
  if (alpha < 0) {
    throw std::invalid_argument("envelope_power: power must be >= 0");
  }
  // (s^2 - 1)^alpha = sum_k C(alpha, k) (-1)^(alpha-k) s^(2k)
  std::vector<double> coeffs(2 * alpha + 1, 0.0);
  for (int k = 0; k <= alpha; ++k) {
    const double sign = ((alpha - k) % 2 == 0) ? 1.0 : -1.0;
    coeffs[2 * k] = sign * binomial(alpha, k);
  }
  return Poly1D(std::move(coeffs));
}

Poly1D Poly1D::derivative() const {
  if (coeffs_.size() == 1) return Poly1D(std::vector<double>{0.0});
  std::vector<double> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    out[i - 1] = coeffs_[i] * static_cast<double>(i);
  }
  return Poly1D(std::move(out));
}

double Poly1D::operator()(double s) const {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc * s + coeffs_[i];
  }
  return acc;
}

TrigPoly1D TrigPoly1D::derivative() const {
  // d/ds [P cos + Q sin] = (P' + freq Q) cos + (Q' - freq P) sin
  TrigPoly1D out;
  out.freq = freq;
  out.pc = poly_axpy(pc.derivative(), freq, ps);
  out.ps = poly_axpy(ps.derivative(), -freq, pc);
  return out;
}

double TrigPoly1D::operator()(double s) const {
  if (freq == 0.0) return pc(s);
  return pc(s) * std::cos(freq * s) + ps(s) * std::sin(freq * s);
}

TrigPoly1D TrigPoly1D::constant(double value) {
  TrigPoly1D out;
  out.pc = Poly1D(std::vector<double>{value});
  out.ps = Poly1D(std::vector<double>{0.0});
  return out;
}

TrigPoly1D TrigPoly1D::polynomial(std::vector<double> coeffs) {
  TrigPoly1D out;
  out.pc = Poly1D(std::move(coeffs));
  out.ps = Poly1D(std::vector<double>{0.0});
  return out;
}

TrigPoly1D TrigPoly1D::cosine(double freq) {
  TrigPoly1D out;
  out.pc = Poly1D(std::vector<double>{1.0});
  out.ps = Poly1D(std::vector<double>{0.0});
  out.freq = freq;
  return out;
}

TrigPoly1D TrigPoly1D::sine(double freq) {
  TrigPoly1D out;
  out.pc = Poly1D(std::vector<double>{0.0});
  out.ps = Poly1D(std::vector<double>{1.0});
  out.freq = freq;
  return out;
}

std::vector<WeightSpec> enumerate_weight_set(int alpha, int beta, int l,
                                             int m) {
  if (alpha < 1 || beta < 1) {
    throw std::invalid_argument(
        "enumerate_weight_set: envelope powers must be >= 1");
  }
  if (l < 0 || m < 0) {
    throw std::invalid_argument(
        "enumerate_weight_set: frequency indices must be >= 0");
  }
  std::vector<Parity> parities_x{Parity::cos};
  if (l > 0) parities_x.push_back(Parity::sin);
  std::vector<Parity> parities_t{Parity::cos};
  if (m > 0) parities_t.push_back(Parity::sin);
  std::vector<WeightSpec> weights;
  for (Parity px : parities_x) {
    for (Parity pt : parities_t) {
      weights.push_back(WeightSpec{alpha, beta, l, m, px, pt});
    }
  }
  return weights;
}

WeightFactor1D::WeightFactor1D(int env_power, int freq_index, Parity parity)
    : alpha_(env_power),
      freq_index_(freq_index),
      parity_(parity),
      freq_(static_cast<double>(freq_index) * M_PI) {
  if (env_power < 0) {
    throw std::invalid_argument("WeightFactor1D: envelope power must be >= 0");
  }
  if (freq_index < 0) {
    throw std::invalid_argument("WeightFactor1D: frequency index must be >= 0");
  }
  if (parity == Parity::sin && freq_index == 0) {
    throw std::invalid_argument(
        "WeightFactor1D: sine parity is undefined at frequency zero");
  }
  env_derivs_.reserve(alpha_ + 1);
  env_derivs_.push_back(Poly1D::envelope_power(alpha_));
  for (int j = 1; j <= alpha_; ++j) {
    env_derivs_.push_back(env_derivs_.back().derivative());
  }
}

double WeightFactor1D::derivative(int nu, double s) const {
  if (nu < 0 || nu > alpha_) {
    throw std::invalid_argument(
        "WeightFactor1D: derivative order must lie in [0, envelope power]");
  }
  const double c = std::cos(freq_ * s);
  const double sn = std::sin(freq_ * s);
  double acc = 0.0;
  double qpow = 1.0;  // freq^(nu - j) accumulated from j = nu downward
  for (int j = nu; j >= 0; --j) {
    const int k = nu - j;  // trig derivative order
    acc += binomial(nu, j) * env_derivs_[j](s) * qpow *
           trig_cycle(parity_, k, c, sn);
    qpow *= freq_;
  }
  return acc;
}

Eigen::VectorXd WeightFactor1D::derivative_profile(
    int nu, Eigen::Index half_cells) const {
  if (half_cells < 1) {
    throw std::invalid_argument("derivative_profile: half_cells must be >= 1");
  }
  Eigen::VectorXd out(2 * half_cells + 1);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double s = static_cast<double>(i - half_cells) /
                     static_cast<double>(half_cells);
    out(i) = derivative(nu, s);
  }
  return out;
}

Eigen::MatrixXd eval_weight_derivative(const WeightSpec& w, int nu_x, int nu_t,
                                       const IntegrationDomain& domain,
                                       double delta_x, double delta_t) {
  if (nu_x < 0 || nu_t < 0) {
    throw std::invalid_argument(
        "eval_weight_derivative: derivative orders must be >= 0");
  }
  if (nu_x > w.alpha || nu_t > w.beta) {
    throw std::invalid_argument(
        "eval_weight_derivative: derivative order exceeds envelope power");
  }
  if (delta_x <= 0.0 || delta_t <= 0.0) {
    throw std::invalid_argument(
        "eval_weight_derivative: grid spacings must be positive");
  }
  const WeightFactor1D fx(w.alpha, w.l, w.parity_x);
  const WeightFactor1D ft(w.beta, w.m, w.parity_t);
  const double hx = static_cast<double>(domain.half_cells_x) * delta_x;
  const double ht = static_cast<double>(domain.half_cells_t) * delta_t;
  const double scale =
      std::pow(hx, -static_cast<double>(nu_x)) *
      std::pow(ht, -static_cast<double>(nu_t));
  Eigen::VectorXd px = fx.derivative_profile(nu_x, domain.half_cells_x);
  Eigen::VectorXd pt = ft.derivative_profile(nu_t, domain.half_cells_t);
  return scale * (px * pt.transpose());
}

}  // namespace wfr
