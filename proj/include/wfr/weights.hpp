#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wfr/domain.hpp"

namespace wfr {

// Dense univariate polynomial, coefficients lowest-degree first.
class Poly1D {
 public:
  Poly1D() : coeffs_{0.0} {}
  explicit Poly1D(std::vector<double> coeffs);

  // (s^2 - 1)^alpha, exact integer coefficients.
  static Poly1D envelope_power(int alpha);

  Poly1D derivative() const;
  double operator()(double s) const;  // Horner
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

// P(s) cos(freq s) + Q(s) sin(freq s): the smallest function family that is
// closed under differentiation and contains polynomials and sinusoids.  Used
// for analytic coefficient factors multiplying library terms.
struct TrigPoly1D {
  Poly1D pc;
  Poly1D ps;
  double freq = 0.0;

  TrigPoly1D derivative() const;
  double operator()(double s) const;

  static TrigPoly1D constant(double value);
  static TrigPoly1D polynomial(std::vector<double> coeffs);
  static TrigPoly1D cosine(double freq);
  static TrigPoly1D sine(double freq);
};

enum class Parity { cos, sin };

// Separable windowed test function in local window coordinates
// x_bar, t_bar in [-1, 1]:
//   w = (x_bar^2-1)^alpha (t_bar^2-1)^beta trig_x(l pi x_bar) trig_t(m pi t_bar)
// where trig is cos or sin according to the parity fields.  The envelope
// powers make w and its first alpha-1 (beta-1) derivatives vanish at the
// window boundary, which is what lets integration by parts drop all boundary
// terms.
struct WeightSpec {
  int alpha = 8;
  int beta = 8;
  int l = 0;
  int m = 0;
  Parity parity_x = Parity::cos;
  Parity parity_t = Parity::cos;
};

// All distinct real weights spanned by the four complex combinations
// exp(+-i l pi x_bar) exp(+-i m pi t_bar): {cos,sin}_x x {cos,sin}_t with the
// sine factor dropped at frequency zero.  4 weights for l,m > 0, 2 if exactly
// one index is zero, 1 if both are.  Throws std::invalid_argument for
// alpha or beta < 1 or negative frequency indices.
std::vector<WeightSpec> enumerate_weight_set(int alpha, int beta, int l, int m);

// One separable weight factor with closed-form derivatives.  Derivatives are
// evaluated in Leibniz form sum_j C(nu,j) E^(j)(s) q^(nu-j) trig^(nu-j)(q s),
// with the envelope derivatives E^(j) kept as exact integer-coefficient
// polynomials: at s = +-1 every term then vanishes exactly in floating point,
// so boundary values are 0 to the last bit.
class WeightFactor1D {
 public:
  WeightFactor1D(int env_power, int freq_index, Parity parity);

  // d^nu/ds^nu [(s^2-1)^alpha trig(q s)] at s (window coordinates).
  double derivative(int nu, double s) const;

  // The same on the canonical window grid s_i = (i - half)/half,
  // i = 0 .. 2*half.
  Eigen::VectorXd derivative_profile(int nu, Eigen::Index half_cells) const;

  int env_power() const { return alpha_; }

 private:
  int alpha_;
  int freq_index_;
  Parity parity_;
  double freq_;                     // freq_index * pi
  std::vector<Poly1D> env_derivs_;  // orders 0 .. alpha
};

// Physical-coordinate derivative d^{nu_x}_x d^{nu_t}_t w evaluated on every
// grid point of `domain`, including the chain-rule factors H_x^{-nu_x}
// H_t^{-nu_t} with H = half_cells * delta.  Throws std::invalid_argument if a
// derivative order exceeds the corresponding envelope power (the weight then
// no longer vanishes at the boundary and integration by parts breaks down).
Eigen::MatrixXd eval_weight_derivative(const WeightSpec& w, int nu_x, int nu_t,
                                       const IntegrationDomain& domain,
                                       double delta_x, double delta_t);

}  // namespace wfr
