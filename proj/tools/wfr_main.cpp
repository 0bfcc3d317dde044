// Command-line front end: simulate chaotic test data, identify the dynamics
// hidden in a gridded dataset, sweep experiment parameters over ensembles,
// and dump spectrum profiles.  Every run that writes an output also writes a
// JSON manifest describing it; --from-manifest replays a recorded run.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
// failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wfr/assembly.hpp"
#include "wfr/domain.hpp"
#include "wfr/experiments.hpp"
#include "wfr/field.hpp"
#include "wfr/field_io.hpp"
#include "wfr/ks.hpp"
#include "wfr/manifest.hpp"
#include "wfr/regression.hpp"
#include "wfr/terms.hpp"
#include "wfr/version.hpp"
#include "wfr/weights.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

// File-system failures get their own exception type so main() can map them
// to exit code 3 while other runtime errors (numerical failures) map to 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
auto io_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string default_manifest_path(const std::string& explicit_path,
                                  const std::string& output_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (!output_path.empty()) return output_path + ".manifest.json";
  return "";
}

void finish_manifest(wfr::RunManifest& manifest, const std::string& path) {
  if (path.empty()) return;
  manifest.tool = "wfr";
  manifest.version = wfr::kVersion;
  manifest.created_utc = wfr::current_utc_timestamp();
  io_guard([&] { wfr::write_manifest(manifest, path); });
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateParams {
  std::string output;
  std::string manifest;
  double length_x = 32.0 * 3.14159265358979323846;
  int nx = 2048;
  double dt = 0.005;
  double duration = 500.0;
  double transient = 50.0;
  int save_stride = 50;
  std::uint64_t seed = 1;
};

void add_simulate(CLI::App& app, SimulateParams& p) {
  CLI::App* sub = app.add_subcommand(
      "simulate", "Integrate the Kuramoto-Sivashinsky equation and write the "
                  "recorded snapshots as a field file");
  sub->set_config("--config");
  sub->add_option("--output", p.output, "Field file to write")->required();
  sub->add_option("--manifest", p.manifest,
                  "Manifest path (default: <output>.manifest.json)");
  sub->add_option("--length-x", p.length_x, "Periodic domain length");
  sub->add_option("--nx", p.nx, "Number of spatial grid points");
  sub->add_option("--dt", p.dt, "Integrator time step");
  sub->add_option("--duration", p.duration, "Recorded time span");
  sub->add_option("--transient", p.transient,
                  "Initial span integrated but not recorded");
  sub->add_option("--save-stride", p.save_stride,
                  "Time steps between saved snapshots");
  sub->add_option("--seed", p.seed, "Initial-condition seed");
}

int run_simulate(const SimulateParams& p) {
  wfr::SimulationConfig config;
  config.length_x = p.length_x;
  config.n_x = p.nx;
  config.dt = p.dt;
  config.duration = p.duration;
  config.transient_time = p.transient;
  config.save_stride = p.save_stride;
  config.seed = p.seed;

  Stopwatch sim_clock;
  const wfr::Field2D field = wfr::simulate_ks(config);
  const double sim_sec = sim_clock.seconds();

  Stopwatch write_clock;
  io_guard([&] { wfr::write_field(field, p.output); });
  const double write_sec = write_clock.seconds();

  std::cout << "wrote " << p.output << ": n_x=" << field.nx()
            << " n_t=" << field.nt() << " delta_x=" << fmt_full(field.delta_x)
            << " delta_t=" << fmt_full(field.delta_t) << "\n";

  wfr::RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.config = {
      {"output", p.output},
      {"length-x", fmt_full(p.length_x)},
      {"nx", std::to_string(p.nx)},
      {"dt", fmt_full(p.dt)},
      {"duration", fmt_full(p.duration)},
      {"transient", fmt_full(p.transient)},
      {"save-stride", std::to_string(p.save_stride)},
      {"seed", std::to_string(p.seed)},
  };
  manifest.outputs = {p.output};
  manifest.timings_sec = {{"simulate", sim_sec}, {"write", write_sec}};
  finish_manifest(manifest, default_manifest_path(p.manifest, p.output));
  return 0;
}

// ---------------------------------------------------------------------------
// identify

struct IdentifyParams {
  std::string input;
  std::string output;  // model JSON (optional)
  std::string manifest;
  double sigma = 0.0;
  std::uint64_t noise_seed = 1;
  std::uint64_t domain_seed = 1;
  int stride_x = 1, stride_t = 1;
  double crop_x = 0.0, crop_t = 0.0;
  int alpha = 8, beta = 8, l = 1, m = 2;
  double size_x = 14.73, size_t_ = 75.0;
  int domains = 50;
  double gamma = 1.4;
  int reference_term = 0;
};

void add_identify(CLI::App& app, IdentifyParams& p) {
  CLI::App* sub = app.add_subcommand(
      "identify", "Recover a sparse differential-equation model from one "
                  "gridded dataset");
  sub->set_config("--config");
  sub->add_option("--input", p.input, "Field file to read")->required();
  sub->add_option("--output", p.output, "Model JSON to write (optional)");
  sub->add_option("--manifest", p.manifest,
                  "Manifest path (default: <output>.manifest.json when "
                  "--output is given)");
  sub->add_option("--sigma", p.sigma,
                  "Added noise level relative to the sample stddev");
  sub->add_option("--noise-seed", p.noise_seed, "Seed for the noise draw");
  sub->add_option("--domain-seed", p.domain_seed,
                  "Seed for integration-domain placement");
  sub->add_option("--stride-x", p.stride_x, "Downsampling stride along x");
  sub->add_option("--stride-t", p.stride_t, "Downsampling stride along t");
  sub->add_option("--crop-x", p.crop_x, "Keep only this extent along x");
  sub->add_option("--crop-t", p.crop_t, "Keep only this extent along t");
  sub->add_option("--alpha", p.alpha, "Envelope power along x");
  sub->add_option("--beta", p.beta, "Envelope power along t");
  sub->add_option("--l", p.l, "Weight frequency index along x");
  sub->add_option("--m", p.m, "Weight frequency index along t");
  sub->add_option("--size-x", p.size_x, "Target domain size along x");
  sub->add_option("--size-t", p.size_t_, "Target domain size along t");
  sub->add_option("--domains", p.domains, "Number of integration domains");
  sub->add_option("--gamma", p.gamma, "Elimination termination threshold");
  sub->add_option("--reference-term", p.reference_term,
                  "Library term whose coefficient is normalized to 1");
}

std::map<std::string, std::string> identify_config_map(
    const IdentifyParams& p) {
  return {
      {"input", p.input},
      {"sigma", fmt_full(p.sigma)},
      {"noise-seed", std::to_string(p.noise_seed)},
      {"domain-seed", std::to_string(p.domain_seed)},
      {"stride-x", std::to_string(p.stride_x)},
      {"stride-t", std::to_string(p.stride_t)},
      {"crop-x", fmt_full(p.crop_x)},
      {"crop-t", fmt_full(p.crop_t)},
      {"alpha", std::to_string(p.alpha)},
      {"beta", std::to_string(p.beta)},
      {"l", std::to_string(p.l)},
      {"m", std::to_string(p.m)},
      {"size-x", fmt_full(p.size_x)},
      {"size-t", fmt_full(p.size_t_)},
      {"domains", std::to_string(p.domains)},
      {"gamma", fmt_full(p.gamma)},
      {"reference-term", std::to_string(p.reference_term)},
  };
}

int run_identify(const IdentifyParams& p) {
  Stopwatch total_clock;
  const wfr::Field2D raw = io_guard([&] { return wfr::read_field(p.input); });

  wfr::ExperimentConfig prep;
  prep.stride_x = p.stride_x;
  prep.stride_t = p.stride_t;
  prep.crop_length_x = p.crop_x;
  prep.crop_length_t = p.crop_t;
  const wfr::Field2D base = wfr::prepare_field(raw, prep);
  const wfr::Field2D data =
      p.sigma > 0.0 ? wfr::add_gaussian_noise(base, p.sigma, p.noise_seed)
                    : base;

  const std::vector<wfr::MonomialTerm> library = wfr::default_ks_library();
  const std::vector<wfr::WeightSpec> weights =
      wfr::enumerate_weight_set(p.alpha, p.beta, p.l, p.m);
  const Eigen::Index half_x = wfr::half_cells_for_size(p.size_x, base.delta_x);
  const Eigen::Index half_t =
      wfr::half_cells_for_size(p.size_t_, base.delta_t);
  const std::vector<wfr::IntegrationDomain> domains = wfr::sample_domains(
      static_cast<std::size_t>(p.domains), half_x, half_t, base.grid(),
      p.domain_seed);

  const wfr::LibraryMatrix matrix =
      wfr::assemble_library(data, library, weights, domains);
  const wfr::SparseModel model = wfr::iterative_elimination(matrix, p.gamma);

  // Pick the display normalization: the requested reference term if it
  // survived, otherwise the largest-magnitude surviving term.
  int display_ref = -1;
  for (int term : model.active_terms) {
    if (term == p.reference_term) display_ref = term;
  }
  if (display_ref < 0) {
    double best = -1.0;
    for (std::size_t i = 0; i < model.active_terms.size(); ++i) {
      const double mag = std::abs(model.coefficients[
          static_cast<Eigen::Index>(i)]);
      if (mag > best) {
        best = mag;
        display_ref = model.active_terms[i];
      }
    }
    std::cerr << "note: reference term "
              << library[static_cast<std::size_t>(p.reference_term)].label
              << " was eliminated; showing the equation normalized to "
              << library[static_cast<std::size_t>(display_ref)].label << "\n";
  }
  if (model.degenerate_warning) {
    std::cerr << "warning: near-degenerate smallest singular value; the "
                 "recovered model is not unique\n";
  }

  const std::string equation =
      wfr::model_equation_string(model, library, display_ref);
  std::cout << equation << "\n";
  std::cout << "residual eta = " << fmt_full(model.residual) << "\n";

  nlohmann::json j;
  j["equation"] = equation;
  j["reference_term"] = display_ref;
  j["residual"] = model.residual;
  j["degenerate_warning"] = model.degenerate_warning;
  const std::vector<double> normalized =
      wfr::normalize_to_term(model, display_ref);
  nlohmann::json jterms = nlohmann::json::array();
  for (std::size_t i = 0; i < model.active_terms.size(); ++i) {
    nlohmann::json jt;
    jt["index"] = model.active_terms[i];
    jt["label"] = library[static_cast<std::size_t>(model.active_terms[i])].label;
    jt["coefficient"] = model.coefficients[static_cast<Eigen::Index>(i)];
    jt["normalized"] = normalized[i];
    jterms.push_back(jt);
  }
  j["terms"] = jterms;
  nlohmann::json jtrace = nlohmann::json::array();
  for (const wfr::EliminationStep& step : model.trace) {
    nlohmann::json js;
    js["term"] = step.term;
    js["label"] = library[static_cast<std::size_t>(step.term)].label;
    js["eta_before"] = step.eta_before;
    js["eta_after"] = step.eta_after;
    jtrace.push_back(js);
  }
  j["trace"] = jtrace;

  if (!p.output.empty()) {
    io_guard([&] { write_text_file(p.output, j.dump(2) + "\n"); });
  }

  wfr::RunManifest manifest;
  manifest.subcommand = "identify";
  manifest.config = identify_config_map(p);
  if (!p.output.empty()) {
    manifest.config["output"] = p.output;
    manifest.outputs = {p.output};
  }
  manifest.inputs = {p.input};
  manifest.timings_sec = {{"total", total_clock.seconds()}};
  finish_manifest(manifest, default_manifest_path(p.manifest, p.output));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepParams {
  std::string input;
  std::string output;
  std::string manifest;
  std::string axis;
  std::vector<double> values;
  double sigma = 0.03;
  int alpha = 8, beta = 8, l = 1, m = 2;
  double size_x = 14.73, size_t_ = 75.0;
  int domains = 50;
  double gamma = 1.4;
  int trials = 30;
  std::uint64_t seed = 1;
  int stride_x = 1, stride_t = 1;
  double crop_x = 0.0, crop_t = 0.0;
  int reference_term = 0;
};

void add_sweep(CLI::App& app, SweepParams& p) {
  CLI::App* sub = app.add_subcommand(
      "sweep", "Run identification ensembles while sweeping one parameter "
               "and write accuracy statistics as CSV");
  sub->set_config("--config");
  sub->add_option("--input", p.input, "Field file to read")->required();
  sub->add_option("--output", p.output, "CSV file to write")->required();
  sub->add_option("--manifest", p.manifest,
                  "Manifest path (default: <output>.manifest.json)");
  sub->add_option("--axis", p.axis,
                  "Swept parameter: sigma, gamma, stride, K, F_x, F_t, L_x, "
                  "L_t, l, m, alpha_beta")
      ->required();
  sub->add_option("--values", p.values, "Sweep values (comma separated)")
      ->required()
      ->delimiter(',');
  sub->add_option("--sigma", p.sigma, "Baseline noise level");
  sub->add_option("--alpha", p.alpha, "Envelope power along x");
  sub->add_option("--beta", p.beta, "Envelope power along t");
  sub->add_option("--l", p.l, "Weight frequency index along x");
  sub->add_option("--m", p.m, "Weight frequency index along t");
  sub->add_option("--size-x", p.size_x, "Target domain size along x");
  sub->add_option("--size-t", p.size_t_, "Target domain size along t");
  sub->add_option("--domains", p.domains, "Integration domains per trial");
  sub->add_option("--gamma", p.gamma, "Elimination termination threshold");
  sub->add_option("--trials", p.trials, "Trials per sweep value");
  sub->add_option("--seed", p.seed, "Master seed for the ensembles");
  sub->add_option("--stride-x", p.stride_x, "Baseline stride along x");
  sub->add_option("--stride-t", p.stride_t, "Baseline stride along t");
  sub->add_option("--crop-x", p.crop_x, "Keep only this extent along x");
  sub->add_option("--crop-t", p.crop_t, "Keep only this extent along t");
  sub->add_option("--reference-term", p.reference_term,
                  "Term whose coefficient is normalized to 1 in error "
                  "metrics");
}

int run_sweep(const SweepParams& p) {
  Stopwatch total_clock;
  const wfr::Field2D raw = io_guard([&] { return wfr::read_field(p.input); });

  wfr::ExperimentConfig base;
  base.sigma = p.sigma;
  base.alpha = p.alpha;
  base.beta = p.beta;
  base.l = p.l;
  base.m = p.m;
  base.domain_size_x = p.size_x;
  base.domain_size_t = p.size_t_;
  base.n_domains = p.domains;
  base.gamma = p.gamma;
  base.trials = p.trials;
  base.master_seed = p.seed;
  base.stride_x = p.stride_x;
  base.stride_t = p.stride_t;
  base.crop_length_x = p.crop_x;
  base.crop_length_t = p.crop_t;
  base.reference_term = p.reference_term;

  const wfr::SweepAxis axis = wfr::parse_sweep_axis(p.axis);
  const wfr::SweepResult result = wfr::sweep(raw, base, axis, p.values);

  const std::vector<wfr::MonomialTerm> library = wfr::default_ks_library();
  const std::vector<wfr::TruthTerm> truth = {
      {0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  io_guard([&] {
    write_text_file(p.output,
                    wfr::sweep_csv(result, library, truth, p.reference_term));
  });

  for (const wfr::SweepPoint& point : result.points) {
    std::cout << p.axis << "=" << fmt_full(point.value)
              << " exact_support=" << point.result.support.n_exact << "/"
              << point.result.support.trials;
    for (const wfr::TermStat& stat : point.result.stats) {
      std::cout << " dc[" << library[static_cast<std::size_t>(stat.term)].label
                << "]=" << fmt_full(stat.mean_error);
    }
    std::cout << "\n";
  }
  std::cout << "wrote " << p.output << "\n";

  std::string values_csv;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (i) values_csv += ",";
    values_csv += fmt_full(p.values[i]);
  }
  wfr::RunManifest manifest;
  manifest.subcommand = "sweep";
  manifest.config = {
      {"input", p.input},
      {"output", p.output},
      {"axis", p.axis},
      {"values", values_csv},
      {"sigma", fmt_full(p.sigma)},
      {"alpha", std::to_string(p.alpha)},
      {"beta", std::to_string(p.beta)},
      {"l", std::to_string(p.l)},
      {"m", std::to_string(p.m)},
      {"size-x", fmt_full(p.size_x)},
      {"size-t", fmt_full(p.size_t_)},
      {"domains", std::to_string(p.domains)},
      {"gamma", fmt_full(p.gamma)},
      {"trials", std::to_string(p.trials)},
      {"seed", std::to_string(p.seed)},
      {"stride-x", std::to_string(p.stride_x)},
      {"stride-t", std::to_string(p.stride_t)},
      {"crop-x", fmt_full(p.crop_x)},
      {"crop-t", fmt_full(p.crop_t)},
      {"reference-term", std::to_string(p.reference_term)},
  };
  manifest.inputs = {p.input};
  manifest.outputs = {p.output};
  manifest.timings_sec = {{"total", total_clock.seconds()}};
  finish_manifest(manifest, default_manifest_path(p.manifest, p.output));
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumParams {
  std::string input;
  std::string output;
  std::string manifest;
  std::string axis = "x";
  bool windowed = false;
  int alpha = 8, beta = 8;
  double size_x = 14.73, size_t_ = 75.0;
  int domains = 50;
  std::uint64_t seed = 1;
  int stride_x = 1, stride_t = 1;
  double crop_x = 0.0, crop_t = 0.0;
};

void add_spectrum(CLI::App& app, SpectrumParams& p) {
  CLI::App* sub = app.add_subcommand(
      "spectrum", "Write a magnitude spectrum profile of a field as CSV, "
                  "either plain or restricted to enveloped windows");
  sub->set_config("--config");
  sub->add_option("--input", p.input, "Field file to read")->required();
  sub->add_option("--output", p.output, "CSV file to write")->required();
  sub->add_option("--manifest", p.manifest,
                  "Manifest path (default: <output>.manifest.json)");
  sub->add_option("--axis", p.axis, "Spectrum axis: x or t")
      ->check(CLI::IsMember({"x", "t"}));
  sub->add_flag("--windowed", p.windowed,
                "Average windowed spectra over random domains instead of the "
                "plain spectrum");
  sub->add_option("--alpha", p.alpha, "Envelope power along x (windowed)");
  sub->add_option("--beta", p.beta, "Envelope power along t (windowed)");
  sub->add_option("--size-x", p.size_x, "Window size along x (windowed)");
  sub->add_option("--size-t", p.size_t_, "Window size along t (windowed)");
  sub->add_option("--domains", p.domains, "Number of windows (windowed)");
  sub->add_option("--seed", p.seed, "Window placement seed (windowed)");
  sub->add_option("--stride-x", p.stride_x, "Downsampling stride along x");
  sub->add_option("--stride-t", p.stride_t, "Downsampling stride along t");
  sub->add_option("--crop-x", p.crop_x, "Keep only this extent along x");
  sub->add_option("--crop-t", p.crop_t, "Keep only this extent along t");
}

int run_spectrum(const SpectrumParams& p) {
  Stopwatch total_clock;
  const wfr::Field2D raw = io_guard([&] { return wfr::read_field(p.input); });
  wfr::ExperimentConfig prep;
  prep.stride_x = p.stride_x;
  prep.stride_t = p.stride_t;
  prep.crop_length_x = p.crop_x;
  prep.crop_length_t = p.crop_t;
  const wfr::Field2D base = wfr::prepare_field(raw, prep);
  const wfr::Axis axis = (p.axis == "x") ? wfr::Axis::x : wfr::Axis::t;

  wfr::SpectrumProfile profile;
  if (p.windowed) {
    const Eigen::Index half_x =
        wfr::half_cells_for_size(p.size_x, base.delta_x);
    const Eigen::Index half_t =
        wfr::half_cells_for_size(p.size_t_, base.delta_t);
    const std::vector<wfr::IntegrationDomain> domains = wfr::sample_domains(
        static_cast<std::size_t>(p.domains), half_x, half_t, base.grid(),
        p.seed);
    profile =
        wfr::windowed_spectrum_mean(base, domains, p.alpha, p.beta, axis);
  } else {
    profile = wfr::power_spectrum(base, axis);
  }

  std::string csv = "frequency,magnitude\n";
  for (std::size_t i = 0; i < profile.frequency.size(); ++i) {
    csv += fmt_sci(profile.frequency[i]);
    csv += ',';
    csv += fmt_sci(profile.magnitude[i]);
    csv += '\n';
  }
  io_guard([&] { write_text_file(p.output, csv); });

  std::size_t peak = 0;
  for (std::size_t i = 1; i < profile.magnitude.size(); ++i) {
    if (profile.magnitude[i] > profile.magnitude[peak]) peak = i;
  }
  std::cout << "wrote " << p.output << ": " << profile.frequency.size()
            << " bins, peak at frequency " << fmt_full(profile.frequency[peak])
            << "\n";

  wfr::RunManifest manifest;
  manifest.subcommand = "spectrum";
  manifest.config = {
      {"input", p.input},
      {"output", p.output},
      {"axis", p.axis},
      {"windowed", p.windowed ? "true" : "false"},
      {"alpha", std::to_string(p.alpha)},
      {"beta", std::to_string(p.beta)},
      {"size-x", fmt_full(p.size_x)},
      {"size-t", fmt_full(p.size_t_)},
      {"domains", std::to_string(p.domains)},
      {"seed", std::to_string(p.seed)},
      {"stride-x", std::to_string(p.stride_x)},
      {"stride-t", std::to_string(p.stride_t)},
      {"crop-x", fmt_full(p.crop_x)},
      {"crop-t", fmt_full(p.crop_t)},
  };
  manifest.inputs = {p.input};
  manifest.outputs = {p.output};
  manifest.timings_sec = {{"total", total_clock.seconds()}};
  finish_manifest(manifest, default_manifest_path(p.manifest, p.output));
  return 0;
}

// ---------------------------------------------------------------------------
// --from-manifest replay

// Rewrites the argument list of a replay invocation into the recorded
// subcommand plus its recorded options.  Only --threads may accompany
// --from-manifest; a replay is meant to reproduce the recorded run exactly.
std::vector<std::string> expand_manifest_args(
    const std::vector<std::string>& args) {
  std::string manifest_path;
  std::vector<std::string> passthrough;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--from-manifest") {
      if (i + 1 >= args.size()) {
        throw std::invalid_argument("--from-manifest requires a path");
      }
      manifest_path = args[++i];
    } else if (arg.rfind("--from-manifest=", 0) == 0) {
      manifest_path = arg.substr(std::string("--from-manifest=").size());
    } else if (arg == "--threads") {
      if (i + 1 >= args.size()) {
        throw std::invalid_argument("--threads requires a value");
      }
      passthrough.push_back(arg);
      passthrough.push_back(args[++i]);
    } else if (arg.rfind("--threads=", 0) == 0) {
      passthrough.push_back(arg);
    } else {
      throw std::invalid_argument(
          "--from-manifest replays a recorded run and cannot be combined "
          "with other options (got '" +
          arg + "')");
    }
  }
  if (manifest_path.empty()) {
    throw std::invalid_argument("--from-manifest requires a path");
  }

  const wfr::RunManifest manifest =
      io_guard([&] { return wfr::read_manifest(manifest_path); });
  if (manifest.subcommand.empty()) {
    throw std::invalid_argument("manifest '" + manifest_path +
                                "' does not name a subcommand");
  }

  std::vector<std::string> expanded = std::move(passthrough);
  expanded.push_back(manifest.subcommand);
  for (const auto& [key, value] : manifest.config) {
    expanded.push_back("--" + key + "=" + value);
  }
  return expanded;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  bool has_manifest_flag = false;
  for (const std::string& arg : args) {
    if (arg == "--from-manifest" || arg.rfind("--from-manifest=", 0) == 0) {
      has_manifest_flag = true;
    }
  }
  if (has_manifest_flag) {
    try {
      args = expand_manifest_args(args);
    } catch (const IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{
      "wfr: weak-form identification of sparse differential-equation models "
      "from gridded data"};
  app.set_version_flag("--version", std::string(wfr::kVersion));
  app.require_subcommand(0, 1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker thread count (0 = library default)");

  SimulateParams simulate_params;
  IdentifyParams identify_params;
  SweepParams sweep_params;
  SpectrumParams spectrum_params;
  add_simulate(app, simulate_params);
  add_identify(app, identify_params);
  add_sweep(app, sweep_params);
  add_spectrum(app, spectrum_params);

  std::vector<std::string> argv_storage;
  argv_storage.push_back(argv[0] ? argv[0] : "wfr");
  for (const std::string& arg : args) argv_storage.push_back(arg);
  std::vector<const char*> argv_ptrs;
  argv_ptrs.reserve(argv_storage.size());
  for (const std::string& arg : argv_storage) {
    argv_ptrs.push_back(arg.c_str());
  }

  try {
    app.parse(static_cast<int>(argv_ptrs.size()), argv_ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (app.get_subcommand("simulate")->parsed()) {
      return run_simulate(simulate_params);
    }
    if (app.get_subcommand("identify")->parsed()) {
      return run_identify(identify_params);
    }
    if (app.get_subcommand("sweep")->parsed()) {
      return run_sweep(sweep_params);
    }
    if (app.get_subcommand("spectrum")->parsed()) {
      return run_spectrum(spectrum_params);
    }
    std::cerr << app.help();
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
