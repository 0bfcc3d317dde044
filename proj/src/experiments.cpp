#include "wfr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "wfr/assembly.hpp"
#include "wfr/domain.hpp"
#include "wfr/rng.hpp"
#include "wfr/weights.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wfr {
namespace {

std::vector<MonomialTerm> effective_library(const ExperimentConfig& config) {
  return config.library.empty() ? default_ks_library() : config.library;
}

std::vector<TruthTerm> effective_truth(const ExperimentConfig& config) {
  if (!config.truth.empty()) return config.truth;
  return {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
}

void validate_config(const ExperimentConfig& config,
                     const std::vector<MonomialTerm>& library,
                     const std::vector<TruthTerm>& truth) {
  if (config.stride_x < 1 || config.stride_t < 1) {
    throw std::invalid_argument("downsampling strides must be >= 1");
  }
  if (config.sigma < 0.0) {
    throw std::invalid_argument("noise level sigma must be >= 0");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("trial count must be >= 1");
  }
  if (config.n_domains < 1) {
    throw std::invalid_argument("domain count must be >= 1");
  }
  if (config.domain_size_x <= 0.0 || config.domain_size_t <= 0.0) {
    throw std::invalid_argument("target domain sizes must be positive");
  }
  const int n = static_cast<int>(library.size());
  if (config.reference_term < 0 || config.reference_term >= n) {
    throw std::invalid_argument("reference term index out of range");
  }
  bool ref_in_truth = false;
  for (const TruthTerm& t : truth) {
    if (t.term < 0 || t.term >= n) {
      throw std::invalid_argument("truth term index out of range");
    }
    if (t.term == config.reference_term) {
      ref_in_truth = true;
      if (t.coefficient == 0.0) {
        throw std::invalid_argument(
            "reference term must have a nonzero true coefficient");
      }
    }
  }
  if (!ref_in_truth) {
    throw std::invalid_argument("true support must contain the reference term");
  }
}

double t_quantile_975(int df) {
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

}  // namespace

std::vector<CoefficientError> coefficient_errors(
    const SparseModel& model, const std::vector<TruthTerm>& truth,
    int reference_term) {
  double ref_true = 0.0;
  for (const TruthTerm& t : truth) {
    if (t.term == reference_term) ref_true = t.coefficient;
  }
  if (ref_true == 0.0) {
    throw std::invalid_argument(
        "true support must contain the reference term with a nonzero "
        "coefficient");
  }

  bool ref_usable = false;
  for (std::size_t i = 0; i < model.active_terms.size(); ++i) {
    if (model.active_terms[i] == reference_term) {
      // A reference coefficient this small cannot normalize the model (same
      // threshold normalize_to_term rejects with an exception).
      ref_usable = std::abs(model.coefficients(static_cast<Eigen::Index>(i))) >
                   1e-12;
    }
  }

  std::vector<CoefficientError> errors;
  if (!ref_usable) {
    // Without a usable reference term there is no normalization; every
    // non-reference true term is reported as missing.
    for (const TruthTerm& t : truth) {
      if (t.term == reference_term) continue;
      errors.push_back({t.term, 1.0, true});
    }
    return errors;
  }

  const std::vector<double> c = normalize_to_term(model, reference_term);
  for (const TruthTerm& t : truth) {
    if (t.term == reference_term) continue;
    const double c_true = t.coefficient / ref_true;
    double c_fit = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < model.active_terms.size(); ++i) {
      if (model.active_terms[i] == t.term) {
        c_fit = c[i];
        found = true;
      }
    }
    if (!found) {
      errors.push_back({t.term, 1.0, true});
    } else {
      errors.push_back({t.term, std::abs((c_fit - c_true) / c_true), false});
    }
  }
  return errors;
}

SupportStats support_stats(const std::vector<TrialResult>& trials) {
  SupportStats stats;
  stats.trials = static_cast<int>(trials.size());
  int n_spurious = 0;
  int n_missing = 0;
  for (const TrialResult& trial : trials) {
    if (trial.spurious) ++n_spurious;
    if (trial.missing) ++n_missing;
    if (!trial.spurious && !trial.missing) ++stats.n_exact;
  }
  if (stats.trials > 0) {
    stats.p_spurious = static_cast<double>(n_spurious) / stats.trials;
    stats.p_missing = static_cast<double>(n_missing) / stats.trials;
  }
  return stats;
}

Field2D prepare_field(const Field2D& raw, const ExperimentConfig& config) {
  Field2D field = downsample(raw, config.stride_x, config.stride_t);
  return crop_extent(field, config.crop_length_x, config.crop_length_t);
}

Eigen::Index half_cells_for_size(double target_size, double delta) {
  const Eigen::Index half = static_cast<Eigen::Index>(
      std::llround(target_size / (2.0 * delta)));
  return std::max<Eigen::Index>(1, half);
}

EnsembleResult run_ensemble(const Field2D& raw, const ExperimentConfig& config) {
  const std::vector<MonomialTerm> library = effective_library(config);
  const std::vector<TruthTerm> truth = effective_truth(config);
  validate_config(config, library, truth);

  const Field2D base = prepare_field(raw, config);
  const std::vector<WeightSpec> weights =
      enumerate_weight_set(config.alpha, config.beta, config.l, config.m);

  EnsembleResult result;
  result.delta_x = base.delta_x;
  result.delta_t = base.delta_t;
  result.half_cells_x = half_cells_for_size(config.domain_size_x, base.delta_x);
  result.half_cells_t = half_cells_for_size(config.domain_size_t, base.delta_t);
  result.size_x = 2.0 * static_cast<double>(result.half_cells_x) * base.delta_x;
  result.size_t_ = 2.0 * static_cast<double>(result.half_cells_t) * base.delta_t;
  result.rows = static_cast<Eigen::Index>(config.n_domains) *
                static_cast<Eigen::Index>(weights.size());
  result.extent_x = base.extent_x();
  result.extent_t = base.extent_t();

  if (2 * result.half_cells_x + 1 > base.nx() ||
      2 * result.half_cells_t + 1 > base.nt()) {
    throw std::invalid_argument(
        "integration domains do not fit inside the prepared grid; reduce the "
        "domain sizes or crop/downsample less aggressively");
  }
  if (result.rows < static_cast<Eigen::Index>(library.size())) {
    throw std::invalid_argument(
        "domains x weights must be at least the library size, otherwise the "
        "least-squares null vector is not defined");
  }

  std::set<int> truth_support;
  for (const TruthTerm& t : truth) truth_support.insert(t.term);

  result.trials.resize(static_cast<std::size_t>(config.trials));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < config.trials; ++i) {
    const std::uint64_t noise_seed =
        mix_seed(config.master_seed, static_cast<std::uint64_t>(i), 0);
    const std::uint64_t domain_seed =
        mix_seed(config.master_seed, static_cast<std::uint64_t>(i), 1);

    const Field2D noisy = add_gaussian_noise(base, config.sigma, noise_seed);
    const std::vector<IntegrationDomain> domains =
        sample_domains(config.n_domains, result.half_cells_x,
                       result.half_cells_t, base.grid(), domain_seed);
    const LibraryMatrix matrix =
        assemble_library(noisy, library, weights, domains);
    TrialResult trial;
    trial.model = iterative_elimination(matrix, config.gamma);
    trial.errors = coefficient_errors(trial.model, truth,
                                      config.reference_term);
    for (int term : trial.model.active_terms) {
      if (truth_support.count(term) == 0) trial.spurious = true;
    }
    for (int term : truth_support) {
      if (std::find(trial.model.active_terms.begin(),
                    trial.model.active_terms.end(),
                    term) == trial.model.active_terms.end()) {
        trial.missing = true;
      }
    }
    result.trials[static_cast<std::size_t>(i)] = std::move(trial);
  }

  result.support = support_stats(result.trials);

  // Coefficient accuracy over exactly-recovered trials only.
  for (const TruthTerm& t : truth) {
    if (t.term == config.reference_term) continue;
    TermStat stat;
    stat.term = t.term;
    std::vector<double> values;
    for (const TrialResult& trial : result.trials) {
      if (trial.spurious || trial.missing) continue;
      for (const CoefficientError& err : trial.errors) {
        if (err.term == t.term) values.push_back(err.error);
      }
    }
    stat.count = static_cast<int>(values.size());
    if (stat.count > 0) {
      double sum = 0.0;
      for (double v : values) sum += v;
      stat.mean_error = sum / stat.count;
      if (stat.count > 1) {
        double ss = 0.0;
        for (double v : values) {
          ss += (v - stat.mean_error) * (v - stat.mean_error);
        }
        const double sd = std::sqrt(ss / (stat.count - 1));
        stat.ci_half_width =
            t_quantile_975(stat.count - 1) * sd / std::sqrt(stat.count);
      } else {
        stat.ci_half_width = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      stat.mean_error = std::numeric_limits<double>::quiet_NaN();
      stat.ci_half_width = std::numeric_limits<double>::quiet_NaN();
    }
    result.stats.push_back(stat);
  }
  return result;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "sigma") return SweepAxis::sigma;
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "stride") return SweepAxis::stride;
  if (name == "K") return SweepAxis::rows;
  if (name == "F_x") return SweepAxis::size_x;
  if (name == "F_t") return SweepAxis::size_t_;
  if (name == "L_x") return SweepAxis::extent_x;
  if (name == "L_t") return SweepAxis::extent_t;
  if (name == "l") return SweepAxis::freq_l;
  if (name == "m") return SweepAxis::freq_m;
  if (name == "alpha_beta") return SweepAxis::alpha_beta;
  throw std::invalid_argument(
      "unknown sweep axis '" + name +
      "'; valid axes: sigma, gamma, stride, K, F_x, F_t, L_x, L_t, l, m, "
      "alpha_beta");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::stride: return "stride";
    case SweepAxis::rows: return "K";
    case SweepAxis::size_x: return "F_x";
    case SweepAxis::size_t_: return "F_t";
    case SweepAxis::extent_x: return "L_x";
    case SweepAxis::extent_t: return "L_t";
    case SweepAxis::freq_l: return "l";
    case SweepAxis::freq_m: return "m";
    case SweepAxis::alpha_beta: return "alpha_beta";
  }
  throw std::logic_error("unreachable sweep axis");
}

namespace {

int checked_int_value(double value, const char* what) {
  const long long rounded = std::llround(value);
  if (std::abs(value - static_cast<double>(rounded)) > 1e-9) {
    throw std::invalid_argument(std::string(what) +
                                " sweep values must be integers");
  }
  return static_cast<int>(rounded);
}

int weight_count(int l, int m) {
  return (l > 0 ? 2 : 1) * (m > 0 ? 2 : 1);
}

}  // namespace

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   SweepAxis axis, double value) {
  ExperimentConfig config = base;
  switch (axis) {
    case SweepAxis::sigma:
      if (value < 0.0) throw std::invalid_argument("sigma must be >= 0");
      config.sigma = value;
      break;
    case SweepAxis::gamma:
      config.gamma = value;
      break;
    case SweepAxis::stride: {
      const int k = checked_int_value(value, "stride");
      if (k < 1) throw std::invalid_argument("stride factors must be >= 1");
      config.stride_x = base.stride_x * k;
      config.stride_t = base.stride_t * k;
      break;
    }
    case SweepAxis::rows: {
      const int target = checked_int_value(value, "K");
      if (target < 1) throw std::invalid_argument("K must be >= 1");
      const int per_domain = weight_count(base.l, base.m);
      config.n_domains = std::max(
          1, static_cast<int>(std::llround(static_cast<double>(target) /
                                           per_domain)));
      break;
    }
    case SweepAxis::size_x:
      if (value <= 0.0) throw std::invalid_argument("F_x must be positive");
      config.domain_size_x = value;
      break;
    case SweepAxis::size_t_:
      if (value <= 0.0) throw std::invalid_argument("F_t must be positive");
      config.domain_size_t = value;
      break;
    case SweepAxis::extent_x:
      if (value <= 0.0) throw std::invalid_argument("L_x must be positive");
      config.crop_length_x = value;
      break;
    case SweepAxis::extent_t:
      if (value <= 0.0) throw std::invalid_argument("L_t must be positive");
      config.crop_length_t = value;
      break;
    case SweepAxis::freq_l: {
      const int l = checked_int_value(value, "l");
      if (l < 0) throw std::invalid_argument("l must be >= 0");
      // Hold the row count K fixed as the per-domain weight count changes.
      const int rows = base.n_domains * weight_count(base.l, base.m);
      config.l = l;
      config.n_domains = std::max(
          1, static_cast<int>(std::llround(
                 static_cast<double>(rows) / weight_count(l, base.m))));
      break;
    }
    case SweepAxis::freq_m: {
      const int m = checked_int_value(value, "m");
      if (m < 0) throw std::invalid_argument("m must be >= 0");
      const int rows = base.n_domains * weight_count(base.l, base.m);
      config.m = m;
      config.n_domains = std::max(
          1, static_cast<int>(std::llround(
                 static_cast<double>(rows) / weight_count(base.l, m))));
      break;
    }
    case SweepAxis::alpha_beta: {
      const int a = checked_int_value(value, "alpha_beta");
      if (a < 1) throw std::invalid_argument("alpha_beta must be >= 1");
      config.alpha = a;
      config.beta = a;
      break;
    }
  }
  return config;
}

SweepResult sweep(const Field2D& raw, const ExperimentConfig& base,
                  SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("sweep requires at least one value");
  }
  SweepResult result;
  result.axis = axis;
  result.points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig config = apply_sweep_value(base, axis, values[i]);
    config.master_seed = mix_seed(base.master_seed,
                                  static_cast<std::uint64_t>(axis) + 1,
                                  static_cast<std::uint64_t>(i));
    SweepPoint point;
    point.value = values[i];
    point.result = run_ensemble(raw, config);
    result.points.push_back(std::move(point));
  }
  return result;
}

std::string sweep_csv(const SweepResult& result,
                      const std::vector<MonomialTerm>& library,
                      const std::vector<TruthTerm>& truth,
                      int reference_term) {
  std::ostringstream out;
  out << "value,term,mean_dc,ci_half,p_spurious,p_missing,n_exact,trials\n";
  char buf[64];
  const auto fmt = [&buf](double v) -> std::string {
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
  };
  for (const SweepPoint& point : result.points) {
    for (const TermStat& stat : point.result.stats) {
      std::string label = "term" + std::to_string(stat.term);
      if (stat.term >= 0 && stat.term < static_cast<int>(library.size())) {
        label = library[static_cast<std::size_t>(stat.term)].label;
      }
      out << fmt(point.value) << ',' << label << ',' << fmt(stat.mean_error)
          << ',' << fmt(stat.ci_half_width) << ','
          << fmt(point.result.support.p_spurious) << ','
          << fmt(point.result.support.p_missing) << ','
          << point.result.support.n_exact << ','
          << point.result.support.trials << '\n';
    }
  }
  (void)truth;
  (void)reference_term;
  return out.str();
}

SlopeFit fit_loglog_slope(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("slope fit needs matching x/y lengths");
  }
  const std::size_t n = xs.size();
  if (n < 3) {
    throw std::invalid_argument("slope fit needs at least 3 points");
  }
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) ||
        !std::isfinite(ys[i])) {
      throw std::invalid_argument(
          "slope fit needs positive finite values on both axes");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("slope fit needs at least two distinct x");
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + fit.slope * lx[i]);
    sse += r * r;
  }
  sse = std::max(0.0, sse);
  fit.stderr_slope = std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

int expected_discretization_exponent(int alpha, int beta, int nu_x, int nu_t) {
  if (alpha < 0 || beta < 0 || nu_x < 0 || nu_t < 0) {
    throw std::invalid_argument("orders must be non-negative");
  }
  if (nu_x > alpha || nu_t > beta) {
    throw std::invalid_argument(
        "derivative order exceeds the envelope power; the weight does not "
        "vanish fast enough at the window boundary");
  }
  const int mu = std::min(alpha - nu_x, beta - nu_t);
  return (mu % 2 == 0) ? mu + 2 : mu + 1;
}

}  // namespace wfr
