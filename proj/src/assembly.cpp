#include "wfr/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace wfr {

namespace {

double binomial(int n, int k) {
  double value = 1.0;
  for (int i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(value);
}

Eigen::VectorXd trapezoid_weights(Eigen::Index n) {
  Eigen::VectorXd tau = Eigen::VectorXd::Ones(n);
  tau(0) = 0.5;
  tau(n - 1) = 0.5;
  return tau;
}

// Everything precomputable for one (half_cells_x, half_cells_t) window size:
// weight-derivative profiles on the canonical [-1,1] grids and, for terms
// without a coefficient basis, the fully scaled quadrature profiles.
struct WindowPlan {
  Eigen::Index half_x = 0, half_t = 0;
  double hx = 0.0, ht = 0.0;  // physical half-widths
  Eigen::VectorXd tau_x, tau_t;
  // profiles_x[j][k]: k-th derivative profile of weight j's x factor
  std::vector<std::vector<Eigen::VectorXd>> profiles_x, profiles_t;
  // For basis-free terms: per (weight j, term n), tau-scaled profiles with
  // chain-rule factors folded in.  Empty vectors mark basis-carrying terms.
  std::vector<Eigen::VectorXd> ax, at;  // indexed j * n_terms + n
};

struct TermPlan {
  WeakTerm weak;
  // Derivatives of the separable coefficient factors, orders 0..nu.
  std::vector<TrigPoly1D> gx_derivs, gt_derivs;
  bool has_basis = false;
};

WindowPlan build_window_plan(Eigen::Index half_x, Eigen::Index half_t,
                             double delta_x, double delta_t,
                             const std::vector<TermPlan>& terms,
                             const std::vector<WeightSpec>& weights) {
  WindowPlan plan;
  plan.half_x = half_x;
  plan.half_t = half_t;
  plan.hx = static_cast<double>(half_x) * delta_x;
  plan.ht = static_cast<double>(half_t) * delta_t;
  plan.tau_x = trapezoid_weights(2 * half_x + 1);
  plan.tau_t = trapezoid_weights(2 * half_t + 1);

  int max_nu_x = 0, max_nu_t = 0;
  for (const TermPlan& t : terms) {
    max_nu_x = std::max(max_nu_x, t.weak.nu_x);
    max_nu_t = std::max(max_nu_t, t.weak.nu_t);
  }

  const std::size_t J = weights.size();
  const std::size_t N = terms.size();
  plan.profiles_x.resize(J);
  plan.profiles_t.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    const WeightSpec& w = weights[j];
    WeightFactor1D fx(w.alpha, w.l, w.parity_x);
    WeightFactor1D ft(w.beta, w.m, w.parity_t);
    plan.profiles_x[j].reserve(max_nu_x + 1);
    plan.profiles_t[j].reserve(max_nu_t + 1);
    for (int k = 0; k <= max_nu_x; ++k) {
      plan.profiles_x[j].push_back(fx.derivative_profile(k, half_x));
    }
    for (int k = 0; k <= max_nu_t; ++k) {
      plan.profiles_t[j].push_back(ft.derivative_profile(k, half_t));
    }
  }

  plan.ax.resize(J * N);
  plan.at.resize(J * N);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t n = 0; n < N; ++n) {
      if (terms[n].has_basis) continue;  // handled per domain
      const int nux = terms[n].weak.nu_x;
      const int nut = terms[n].weak.nu_t;
      const double sx = std::pow(plan.hx, -static_cast<double>(nux));
      const double st = std::pow(plan.ht, -static_cast<double>(nut));
      plan.ax[j * N + n] =
          (plan.tau_x.array() * plan.profiles_x[j][nux].array() * sx).matrix();
      plan.at[j * N + n] =
          (plan.tau_t.array() * plan.profiles_t[j][nut].array() * st).matrix();
    }
  }
  return plan;
}

// tau-scaled combined profile for a basis-carrying term on one domain:
// d^nu (g * w) = sum_a C(nu,a) g^(a)(x) w^(nu-a)(x_bar) H^-(nu-a)
Eigen::VectorXd basis_profile(const std::vector<TrigPoly1D>& g_derivs, int nu,
                              const std::vector<Eigen::VectorXd>& w_profiles,
                              double half_width, const Eigen::VectorXd& tau,
                              double coord0, double delta) {
  const Eigen::Index n = tau.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int a = 0; a <= nu; ++a) {
    const double comb = binomial(nu, a);
    const double scale =
        std::pow(half_width, -static_cast<double>(nu - a));
    const Eigen::VectorXd& wk = w_profiles[nu - a];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double coord = coord0 + delta * static_cast<double>(i);
      out(i) += comb * g_derivs[a](coord) * scale * wk(i);
    }
  }
  return (out.array() * tau.array()).matrix();
}

void assemble_domain_rows(const Field2D& field,
                          const std::vector<TermPlan>& terms,
                          const std::vector<WeightSpec>& weights,
                          const IntegrationDomain& domain,
                          const WindowPlan& plan, Eigen::Index first_row,
                          Eigen::MatrixXd& entries) {
  const std::size_t N = terms.size();
  const Eigen::Index px = domain.npoints_x();
  const Eigen::Index pt = domain.npoints_t();
  const double cell = field.delta_x * field.delta_t;

  int max_power = 0;
  for (const TermPlan& t : terms) max_power = std::max(max_power, t.weak.power);

  // u^p windows for p = 0 .. max_power (p = 0 only ever used with nu = 0).
  std::vector<Eigen::MatrixXd> upow(max_power + 1);
  upow[0] = Eigen::MatrixXd::Ones(px, pt);
  if (max_power >= 1) {
    upow[1] = field.values.block(domain.first_x(), domain.first_t(), px, pt);
  }
  for (int p = 2; p <= max_power; ++p) {
    upow[p] = upow[p - 1].cwiseProduct(upow[1]);
  }

  for (std::size_t j = 0; j < weights.size(); ++j) {
    const Eigen::Index row = first_row + static_cast<Eigen::Index>(j);
    for (std::size_t n = 0; n < N; ++n) {
      const TermPlan& term = terms[n];
      Eigen::VectorXd ax_local, at_local;
      const Eigen::VectorXd* ax = &plan.ax[j * N + n];
      const Eigen::VectorXd* at = &plan.at[j * N + n];
      if (term.has_basis) {
        ax_local = basis_profile(term.gx_derivs, term.weak.nu_x,
                                 plan.profiles_x[j], plan.hx, plan.tau_x,
                                 field.x(domain.first_x()), field.delta_x);
        at_local = basis_profile(term.gt_derivs, term.weak.nu_t,
                                 plan.profiles_t[j], plan.ht, plan.tau_t,
                                 field.t(domain.first_t()), field.delta_t);
        ax = &ax_local;
        at = &at_local;
      }
      const Eigen::MatrixXd& up = upow[term.weak.power];
      double acc = 0.0;
      for (Eigen::Index jt = 0; jt < pt; ++jt) {
        const double* col = up.col(jt).data();
        const double* a = ax->data();
        double s = 0.0;
        for (Eigen::Index i = 0; i < px; ++i) s += a[i] * col[i];
        acc += (*at)(jt)*s;
      }
      entries(row, n) = term.weak.prefactor * cell * acc;
    }
  }
}

LibraryMatrix assemble_impl(const Field2D& field,
                            const std::vector<MonomialTerm>& terms,
                            const std::vector<WeightSpec>& weights,
                            const std::vector<IntegrationDomain>& domains,
                            bool parallel) {
  if (terms.empty() || weights.empty() || domains.empty()) {
    throw std::invalid_argument(
        "assemble_library: terms, weights, and domains must be non-empty");
  }
  if (field.delta_x <= 0.0 || field.delta_t <= 0.0) {
    throw std::invalid_argument("assemble_library: grid spacings must be positive");
  }
  if (!field.values.allFinite()) {
    throw std::runtime_error("assemble_library: field contains non-finite samples");
  }

  std::vector<TermPlan> plans;
  plans.reserve(terms.size());
  for (const MonomialTerm& term : terms) {
    TermPlan plan;
    plan.weak = canonical_weak_form(term);
    plan.has_basis = term.coeff_basis.has_value();
    if (plan.has_basis) {
      plan.gx_derivs.push_back(term.coeff_basis->fx);
      for (int a = 1; a <= plan.weak.nu_x; ++a) {
        plan.gx_derivs.push_back(plan.gx_derivs.back().derivative());
      }
      plan.gt_derivs.push_back(term.coeff_basis->ft);
      for (int a = 1; a <= plan.weak.nu_t; ++a) {
        plan.gt_derivs.push_back(plan.gt_derivs.back().derivative());
      }
    }
    for (const WeightSpec& w : weights) {
      if (plan.weak.nu_x > w.alpha || plan.weak.nu_t > w.beta) {
        throw std::invalid_argument(
            "assemble_library: derivative order of term '" + term.label +
            "' exceeds a weight envelope power; integration by parts would "
            "pick up boundary terms");
      }
    }
    plans.push_back(std::move(plan));
  }

  const GridShape grid = field.grid();
  for (const IntegrationDomain& d : domains) {
    if (d.half_cells_x < 1 || d.half_cells_t < 1) {
      throw std::invalid_argument(
          "assemble_library: domains need at least 2 grid cells per axis");
    }
    if (!d.fits(grid)) {
      throw std::invalid_argument(
          "assemble_library: an integration domain lies outside the grid");
    }
  }

  // Window plans cached per distinct domain size (usually exactly one).
  std::map<std::pair<Eigen::Index, Eigen::Index>, WindowPlan> window_plans;
  for (const IntegrationDomain& d : domains) {
    const auto key = std::make_pair(d.half_cells_x, d.half_cells_t);
    if (window_plans.find(key) == window_plans.end()) {
      window_plans.emplace(
          key, build_window_plan(d.half_cells_x, d.half_cells_t, field.delta_x,
                                 field.delta_t, plans, weights));
    }
  }

  LibraryMatrix lib;
  lib.terms = terms;
  lib.weights = weights;
  lib.domains = domains;
  const Eigen::Index J = static_cast<Eigen::Index>(weights.size());
  const Eigen::Index D = static_cast<Eigen::Index>(domains.size());
  lib.entries.resize(D * J, static_cast<Eigen::Index>(terms.size()));

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index d = 0; d < D; ++d) {
      const IntegrationDomain& dom = domains[static_cast<std::size_t>(d)];
      const WindowPlan& plan =
          window_plans.at({dom.half_cells_x, dom.half_cells_t});
      assemble_domain_rows(field, plans, weights, dom, plan, d * J,
                           lib.entries);
    }
  } else {
    for (Eigen::Index d = 0; d < D; ++d) {
      const IntegrationDomain& dom = domains[static_cast<std::size_t>(d)];
      const WindowPlan& plan =
          window_plans.at({dom.half_cells_x, dom.half_cells_t});
      assemble_domain_rows(field, plans, weights, dom, plan, d * J,
                           lib.entries);
    }
  }
  return lib;
}

}  // namespace

LibraryMatrix assemble_library(const Field2D& field,
                               const std::vector<MonomialTerm>& terms,
                               const std::vector<WeightSpec>& weights,
                               const std::vector<IntegrationDomain>& domains) {
  return assemble_impl(field, terms, weights, domains, true);
}

LibraryMatrix assemble_library_serial(
    const Field2D& field, const std::vector<MonomialTerm>& terms,
    const std::vector<WeightSpec>& weights,
    const std::vector<IntegrationDomain>& domains) {
  return assemble_impl(field, terms, weights, domains, false);
}

}  // namespace wfr
