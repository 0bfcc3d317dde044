#include "wfr/terms.hpp"

#include <cmath>
#include <stdexcept>

namespace wfr {

void validate_term(const MonomialTerm& term) {
  if (!std::isfinite(term.prefactor) || term.prefactor == 0.0) {
    throw std::invalid_argument("term '" + term.label +
                                "': prefactor must be finite and nonzero");
  }
  if (term.power < 0) {
    throw std::invalid_argument("term '" + term.label +
                                "': power must be >= 0");
  }
  if (term.nu_x < 0 || term.nu_t < 0) {
    throw std::invalid_argument("term '" + term.label +
                                "': derivative orders must be >= 0");
  }
  if (term.power == 0 && (term.nu_x > 0 || term.nu_t > 0)) {
    throw std::invalid_argument(
        "term '" + term.label +
        "': derivative of the constant term is identically zero");
  }
}

WeakTerm canonical_weak_form(const MonomialTerm& term) {
  validate_term(term);
  WeakTerm weak;
  const int order = term.nu_x + term.nu_t;
  weak.prefactor = (order % 2 == 0) ? term.prefactor : -term.prefactor;
  weak.power = term.power;
  weak.nu_x = term.nu_x;
  weak.nu_t = term.nu_t;
  weak.coeff_basis = term.coeff_basis;
  weak.label = term.label;
  return weak;
}

std::vector<MonomialTerm> default_ks_library() {
  std::vector<MonomialTerm> lib;
  lib.push_back({1.0, 1, 0, 1, std::nullopt, "∂_t u"});
  lib.push_back({0.5, 2, 1, 0, std::nullopt, "u ∂_x u"});
  lib.push_back({1.0, 1, 2, 0, std::nullopt, "∂_x^2 u"});
  lib.push_back({1.0, 1, 4, 0, std::nullopt, "∂_x^4 u"});
  lib.push_back({1.0, 1, 1, 0, std::nullopt, "∂_x u"});
  lib.push_back({1.0, 1, 3, 0, std::nullopt, "∂_x^3 u"});
  lib.push_back({1.0, 1, 0, 0, std::nullopt, "u"});
  lib.push_back({1.0, 2, 0, 0, std::nullopt, "u^2"});
  lib.push_back({1.0, 3, 0, 0, std::nullopt, "u^3"});
  lib.push_back({1.0, 0, 0, 0, std::nullopt, "1"});
  return lib;
}

std::vector<MonomialTerm> expand_variable_coefficient(
    const MonomialTerm& term, const std::vector<CoeffBasis>& basis) {
  validate_term(term);
  if (basis.empty()) {
    throw std::invalid_argument(
        "expand_variable_coefficient: basis must not be empty");
  }
  if (term.coeff_basis.has_value()) {
    throw std::invalid_argument(
        "expand_variable_coefficient: term already carries a coefficient basis");
  }
  std::vector<MonomialTerm> expanded;
  expanded.reserve(basis.size());
  for (const CoeffBasis& g : basis) {
    MonomialTerm t = term;
    t.coeff_basis = g;
    t.label = (g.label == "1") ? term.label : g.label + " " + term.label;
    expanded.push_back(std::move(t));
  }
  return expanded;
}

}  // namespace wfr
