#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfr/weights.hpp"

namespace wfr {

// Separable analytic coefficient g(x, t) = fx(x) * ft(t) attached to a
// library term (physical coordinates).  Both factors live in the
// trig-polynomial family, so every derivative needed by integration by parts
// has a closed form.
struct CoeffBasis {
  TrigPoly1D fx = TrigPoly1D::constant(1.0);
  TrigPoly1D ft = TrigPoly1D::constant(1.0);
  std::string label = "1";
};

// One candidate term c * g(x,t) * d_t^{nu_t} d_x^{nu_x} (u^p) as it appears
// in the model equation sum_n c_n f_n = 0.  The x-advection nonlinearity
// u du/dx is represented in flux form as prefactor 1/2, p = 2, nu_x = 1.
struct MonomialTerm {
  double prefactor = 1.0;
  int power = 1;  // p in u^p; p = 0 encodes the constant term
  int nu_x = 0;
  int nu_t = 0;
  std::optional<CoeffBasis> coeff_basis;
  std::string label;
};

// The same term after integration by parts: all derivatives now act on the
// product g * w of the coefficient and the weight, and the sign flip
// (-1)^(nu_x + nu_t) has been absorbed into the prefactor.  A library column
// entry is prefactor * integral u^p d^nu(g w) over a window.
struct WeakTerm {
  double prefactor = 1.0;
  int power = 1;
  int nu_x = 0;
  int nu_t = 0;
  std::optional<CoeffBasis> coeff_basis;
  std::string label;
};

// Throws std::invalid_argument for malformed terms: negative powers or
// derivative orders, non-finite or zero prefactor, or a derivative applied
// to the constant term (p = 0 with nu > 0 is identically zero).
void validate_term(const MonomialTerm& term);

// Moves all derivatives off u^p and onto the weight via repeated integration
// by parts; boundary terms vanish because the weight envelope does.
WeakTerm canonical_weak_form(const MonomialTerm& term);

// The ten-term candidate library used for Kuramoto-Sivashinsky
// identification, in fixed column order:
//   d_t u, u d_x u, d_x^2 u, d_x^4 u, d_x u, d_x^3 u, u, u^2, u^3, 1
std::vector<MonomialTerm> default_ks_library();

// Expands a term with an unknown space/time dependent coefficient
// c(x,t) = sum_p c'_p g_p(x,t) into one column per basis function g_p.
// Throws std::invalid_argument for an empty basis.
std::vector<MonomialTerm> expand_variable_coefficient(
    const MonomialTerm& term, const std::vector<CoeffBasis>& basis);

}  // namespace wfr
