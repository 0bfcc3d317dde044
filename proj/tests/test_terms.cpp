#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "wfr/terms.hpp"

using wfr::CoeffBasis;
using wfr::MonomialTerm;
using wfr::TrigPoly1D;
using wfr::WeakTerm;

TEST_CASE("term validation rejects malformed candidates") {
  MonomialTerm ok;
  ok.power = 1;
  ok.nu_x = 2;
  CHECK_NOTHROW(wfr::validate_term(ok));

  MonomialTerm zero_prefactor = ok;
  zero_prefactor.prefactor = 0.0;
  CHECK_THROWS_AS(wfr::validate_term(zero_prefactor), std::invalid_argument);

  MonomialTerm nan_prefactor = ok;
  nan_prefactor.prefactor = std::nan("");
  CHECK_THROWS_AS(wfr::validate_term(nan_prefactor), std::invalid_argument);

  MonomialTerm negative_power = ok;
  negative_power.power = -1;
  CHECK_THROWS_AS(wfr::validate_term(negative_power), std::invalid_argument);

  MonomialTerm negative_order = ok;
  negative_order.nu_t = -2;
  CHECK_THROWS_AS(wfr::validate_term(negative_order), std::invalid_argument);

  // A derivative of the constant term is identically zero and cannot be a
  // library column.
  MonomialTerm derived_constant;
  derived_constant.power = 0;
  derived_constant.nu_x = 1;
  CHECK_THROWS_AS(wfr::validate_term(derived_constant), std::invalid_argument);

  MonomialTerm constant;
  constant.power = 0;
  CHECK_NOTHROW(wfr::validate_term(constant));
}

TEST_CASE("integration by parts flips the sign once per derivative order") {
  MonomialTerm advection;
  advection.prefactor = 0.5;
  advection.power = 2;
  advection.nu_x = 1;
  const WeakTerm weak = wfr::canonical_weak_form(advection);
  CHECK(weak.prefactor == -0.5);
  CHECK(weak.power == 2);
  CHECK(weak.nu_x == 1);
  CHECK(weak.nu_t == 0);

  MonomialTerm second;
  second.nu_x = 2;
  CHECK(wfr::canonical_weak_form(second).prefactor == 1.0);

  MonomialTerm third;
  third.nu_x = 3;
  CHECK(wfr::canonical_weak_form(third).prefactor == -1.0);

  MonomialTerm time_derivative;
  time_derivative.nu_t = 1;
  CHECK(wfr::canonical_weak_form(time_derivative).prefactor == -1.0);

  MonomialTerm mixed;
  mixed.nu_x = 1;
  mixed.nu_t = 1;
  CHECK(wfr::canonical_weak_form(mixed).prefactor == 1.0);
}

TEST_CASE("the candidate library lists the ten terms in canonical order") {
  const std::vector<MonomialTerm> lib = wfr::default_ks_library();
  REQUIRE(lib.size() == 10);

  const std::vector<std::string> labels = {
      "∂_t u", "u ∂_x u", "∂_x^2 u", "∂_x^4 u", "∂_x u",
      "∂_x^3 u", "u",     "u^2",     "u^3",     "1"};
  // power, nu_x, nu_t, prefactor per column.
  const int powers[10] = {1, 2, 1, 1, 1, 1, 1, 2, 3, 0};
  const int nux[10] = {0, 1, 2, 4, 1, 3, 0, 0, 0, 0};
  const int nut[10] = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  const double pref[10] = {1.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

  for (std::size_t i = 0; i < lib.size(); ++i) {
    CAPTURE(i);
    CHECK(lib[i].label == labels[i]);
    CHECK(lib[i].power == powers[i]);
    CHECK(lib[i].nu_x == nux[i]);
    CHECK(lib[i].nu_t == nut[i]);
    CHECK(lib[i].prefactor == pref[i]);
    CHECK_FALSE(lib[i].coeff_basis.has_value());
    CHECK_NOTHROW(wfr::validate_term(lib[i]));
  }
}

TEST_CASE("variable-coefficient expansion makes one column per basis function") {
  MonomialTerm term;
  term.power = 1;
  term.nu_x = 1;
  term.label = "∂_x u";

  CoeffBasis one;
  one.label = "1";
  CoeffBasis linear;
  linear.fx = TrigPoly1D::polynomial({0.0, 1.0});
  linear.label = "x";

  const std::vector<MonomialTerm> expanded =
      wfr::expand_variable_coefficient(term, {one, linear});
  REQUIRE(expanded.size() == 2);
  for (const MonomialTerm& t : expanded) {
    CHECK(t.power == term.power);
    CHECK(t.nu_x == term.nu_x);
    REQUIRE(t.coeff_basis.has_value());
    CHECK(t.label.find(term.label) != std::string::npos);
  }
  CHECK(expanded[0].coeff_basis->label == "1");
  CHECK(expanded[1].coeff_basis->label == "x");

  CHECK_THROWS_AS(wfr::expand_variable_coefficient(term, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wfr::expand_variable_coefficient(expanded[1], {one}),
                  std::invalid_argument);
}
