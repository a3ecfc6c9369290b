#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corrcov/linalg.hpp"
#include "corrcov/prng.hpp"
#include "corrcov/shape_models.hpp"

namespace corrcov {

enum class ExperimentKind { MinSampleVsDim, LogErrorVsM };

const char* to_string(ExperimentKind kind) noexcept;

// Inclusive integer range start, start + step, ..., <= stop.
struct IntRange {
  std::size_t start = 1;
  std::size_t stop = 1;
  std::size_t step = 1;

  std::vector<std::size_t> values() const;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind experiment = ExperimentKind::MinSampleVsDim;
  std::vector<ModelDescriptor> models;
  IntRange n_range;
  IntRange m_range;  // LogErrorVsM only
  double eta = 0.2;  // MinSampleVsDim only
  std::size_t trials = 500;
  std::uint64_t master_seed = 0;
  // Covariance of the independent samples; identity of each probed n when empty.
  std::optional<DenseMatrix> sigma;
  // Largest m probed per trial; 0 selects default_m_cap(n).
  std::size_t m_cap = 0;

  // Throws InvalidConfig when eta is outside (0,1), trials is 0, a range is
  // empty or has a zero step, no model is given, sigma does not match every n,
  // or a LogErrorVsM config has more than one n.
  void validate() const;
};

// max(200 n, 2000)
std::size_t default_m_cap(std::size_t n) noexcept;

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = slope * x + intercept. Needs at least 3 points
// and non-constant xs; r_squared is 1 when ys are constant.
FitResult ols_fit(std::span<const double> xs, std::span<const double> ys);

struct MinSampleRecord {
  std::string model_id;
  std::size_t n = 0;
  double mean_min_m = 0.0;  // over uncensored trials; NaN if all were censored
  double stderr_min_m = 0.0;
  std::size_t censored = 0;
  std::size_t trials = 0;
};

struct LogErrorRecord {
  std::string model_id;
  std::size_t m = 0;
  double mean_spectral_error = 0.0;
  double stderr_spectral_error = 0.0;
  double log10_mean_error = 0.0;
  // Expectation bound with norms computed from B; for random_diag, averaged
  // over the per-trial draws of B.
  double theoretical_bound = 0.0;
  // Same bound with closed-form norms; NaN when the model has none.
  double theoretical_bound_analytic = 0.0;
};

struct ModelFit {
  std::string model_id;
  FitResult fit;
};

struct ExperimentResult {
  std::string name;
  ExperimentConfig config;  // as run
  ExperimentKind experiment = ExperimentKind::MinSampleVsDim;
  std::vector<std::string> model_ids;
  std::vector<MinSampleRecord> min_sample;
  std::vector<LogErrorRecord> log_error;
  // Mean min m on n (MinSampleVsDim) or log10 mean error on log10 m (LogErrorVsM).
  std::vector<ModelFit> fits;
  std::vector<std::string> warnings;
  std::size_t n = 0;  // LogErrorVsM dimension
  // False if any mean spectral error exceeded its expectation bound.
  bool bound_respected = true;
};

struct RunOptions {
  // Worker threads; 0 uses std::thread::hardware_concurrency().
  unsigned threads = 0;
  // Called once per finished grid cell with a one-line description.
  std::function<void(const std::string&)> progress;
};

// Smallest m in 1..m_cap whose freshly drawn batch (new X and, for
// random_diag, new rho per probe) meets the relative Frobenius threshold eta.
// Throws CapExceeded with the last probe's error otherwise.
std::size_t min_sample_size_trial(Prng& rng, std::size_t n, const ModelDescriptor& model,
                                  const SpdMatrix& sigma, double eta, std::size_t m_cap);

// Minimal m for trial `trial` of grid cell (n index `cell`); nullopt when censored.
std::optional<std::size_t> min_sample_trial_at(const ExperimentConfig& cfg, const ModelDescriptor& model,
                                               std::size_t n, std::size_t cell, std::size_t trial);

// Spectral error of trial `trial` at grid cell (m index `cell`), with the
// expectation bound for the B drawn in that trial.
struct LogErrorTrial {
  double error;
  double bound;
};
LogErrorTrial log_error_trial_at(const ExperimentConfig& cfg, const ModelDescriptor& model, std::size_t n,
                                 std::size_t m, std::size_t cell, std::size_t trial);

ExperimentResult run_min_sample_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_log_error_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// The three published configurations with trial counts multiplied by scale
// (at least one trial): fig1 time-variant scale factors, fig2 Toeplitz
// models, fig3 log error against m.
std::vector<ExperimentConfig> paper_configs(double scale, std::uint64_t seed);

struct DominanceRow {
  std::string model_id;
  std::size_t n = 0;
  std::size_t m = 0;
  double thm2 = 0.0;
  double soloveychik = 0.0;
  bool dominates = false;  // thm2 < soloveychik
};

// Expectation bound against the Soloveychik bound at m = 10 n, identity sigma,
// numeric norms.
std::vector<DominanceRow> bound_dominance_grid(std::span<const ModelDescriptor> models,
                                               std::span<const std::size_t> ns);

}  // namespace corrcov
