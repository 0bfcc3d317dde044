#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfr/field.hpp"
#include "wfr/regression.hpp"
#include "wfr/terms.hpp"

namespace wfr {

// One true model term: library column index and its coefficient in the
// normalization where the reference term's coefficient is 1.
struct TruthTerm {
  int term = 0;
  double coefficient = 1.0;
};

// Full description of one identification experiment on a given raw dataset.
// The raw field is first downsampled by the strides and truncated to the
// crop extents (non-positive = keep all); noise, domain placement, assembly,
// and elimination then run per trial with seeds derived from
// (master_seed, trial index), so ensembles are replayable trial by trial and
// independent of thread count.
struct ExperimentConfig {
  int stride_x = 1;
  int stride_t = 1;
  double crop_length_x = 0.0;
  double crop_length_t = 0.0;
  double sigma = 0.03;           // noise level relative to sample stddev
  int alpha = 8;
  int beta = 8;
  int l = 1;
  int m = 2;
  double domain_size_x = 14.73;  // target physical window sizes F
  double domain_size_t = 75.0;
  int n_domains = 50;
  double gamma = 1.4;
  std::vector<MonomialTerm> library;  // empty = default_ks_library()
  int reference_term = 0;
  std::vector<TruthTerm> truth;       // empty = KS truth (terms 0..3, coeff 1)
  int trials = 30;
  std::uint64_t master_seed = 1;
};

struct CoefficientError {
  int term = 0;
  double error = 0.0;  // |(c - c_true) / c_true|, or 1 when missing
  bool missing = false;
};

// Relative coefficient errors for every true term other than the reference,
// after normalizing the model to the reference term.  A true term absent
// from the support (or an eliminated reference term) yields error = 1 with
// the missing flag set.
std::vector<CoefficientError> coefficient_errors(
    const SparseModel& model, const std::vector<TruthTerm>& truth,
    int reference_term);

struct TrialResult {
  SparseModel model;
  std::vector<CoefficientError> errors;
  bool spurious = false;  // any recovered term outside the true support
  bool missing = false;   // any true term absent from the recovered support
};

struct SupportStats {
  double p_spurious = 0.0;
  double p_missing = 0.0;
  int n_exact = 0;  // trials recovering the support exactly
  int trials = 0;
};

SupportStats support_stats(const std::vector<TrialResult>& trials);

// Mean coefficient error and 95% confidence half-width (Student t) for one
// true term, over the trials that recovered the support exactly.
struct TermStat {
  int term = 0;
  double mean_error = 0.0;
  double ci_half_width = 0.0;
  int count = 0;
};

struct EnsembleResult {
  std::vector<TrialResult> trials;
  SupportStats support;
  std::vector<TermStat> stats;
  // Achieved geometry, for reporting:
  double delta_x = 0.0, delta_t = 0.0;
  Eigen::Index half_cells_x = 0, half_cells_t = 0;
  double size_x = 0.0, size_t_ = 0.0;  // achieved F = 2 * half_cells * delta
  Eigen::Index rows = 0;               // K = domains * weights
  double extent_x = 0.0, extent_t = 0.0;
};

// The deterministic data-preparation stage: downsample + crop.
Field2D prepare_field(const Field2D& raw, const ExperimentConfig& config);

// Half-cell count whose window best approximates a physical size:
// target_size = 2 * half_cells * delta, rounded, minimum 1.
Eigen::Index half_cells_for_size(double target_size, double delta);

// Runs `config.trials` independent identification trials on `raw` and
// aggregates support statistics and coefficient errors (the latter over
// exactly-recovered trials only, so they measure accuracy rather than
// support mistakes).  Trials are distributed over OpenMP threads; results
// are bit-identical for any thread count.
EnsembleResult run_ensemble(const Field2D& raw, const ExperimentConfig& config);

// Parameter sweep axes.  `stride` scales both downsampling strides by the
// (integer) sweep value; `rows` re-targets K = domains * weights; sweeping
// l or m rescales the domain count to hold K fixed when the weight count
// changes; `alpha_beta` sets both envelope powers.
enum class SweepAxis {
  sigma,
  gamma,
  stride,
  rows,
  size_x,
  size_t_,
  extent_x,
  extent_t,
  freq_l,
  freq_m,
  alpha_beta,
};

// Parses "sigma", "gamma", "stride", "K", "F_x", "F_t", "L_x", "L_t", "l",
// "m", "alpha_beta"; throws std::invalid_argument listing the valid names.
SweepAxis parse_sweep_axis(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  EnsembleResult result;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::sigma;
  std::vector<SweepPoint> points;
};

// Runs one ensemble per value, with per-value master seeds derived from the
// base seed; values are processed in order.
SweepResult sweep(const Field2D& raw, const ExperimentConfig& base,
                  SweepAxis axis, const std::vector<double>& values);

// CSV rendering: header value,term,mean_dc,ci_half,p_spurious,p_missing,
// n_exact,trials and one row per (sweep value, true term != reference),
// numbers in full-precision scientific notation.
std::string sweep_csv(const SweepResult& result,
                      const std::vector<MonomialTerm>& library,
                      const std::vector<TruthTerm>& truth, int reference_term);

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

// Least-squares slope of log y against log x.  Throws std::invalid_argument
// for fewer than 3 points or non-positive values.
SlopeFit fit_loglog_slope(const std::vector<double>& xs,
                          const std::vector<double>& ys);

// Expected quadrature-error exponent for a term with derivative orders
// (nu_x, nu_t) under envelope powers (alpha, beta): with
// mu = min(alpha - nu_x, beta - nu_t), the error scales as h^(mu+2) for even
// mu and h^(mu+1) for odd mu, h being the grid spacing relative to the
// window size.
int expected_discretization_exponent(int alpha, int beta, int nu_x, int nu_t);

}  // namespace wfr
