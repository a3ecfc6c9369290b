#include "corrcov/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "corrcov/bounds.hpp"
#include "corrcov/error.hpp"
#include "corrcov/estimator.hpp"
#include "corrcov/sampling.hpp"

namespace corrcov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any job is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

struct MeanStderr {
  double mean;
  double stderr_;
};

// Mean and standard error, summed in index order.
MeanStderr mean_stderr(std::span<const double> xs) {
  if (xs.empty()) return {kNaN, kNaN};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

SpdMatrix sigma_for(const ExperimentConfig& cfg, std::size_t n) {
  return cfg.sigma ? SpdMatrix(*cfg.sigma) : SpdMatrix::identity(n);
}

ShapeModel probe_model(const ModelDescriptor& d, std::size_t m, Prng& rng) {
  if (d.kind == ModelKind::RandomDiagonal) return d.instantiate(m, rng.next_u64());
  return d.instantiate(m);
}

std::string format_g(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(ExperimentKind kind) noexcept {
  return kind == ExperimentKind::MinSampleVsDim ? "min_sample_vs_dim" : "log_error_vs_m";
}

std::vector<std::size_t> IntRange::values() const {
  std::vector<std::size_t> out;
  if (step == 0) return out;
  for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

std::size_t default_m_cap(std::size_t n) noexcept { return std::max<std::size_t>(200 * n, 2000); }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (models.empty()) fail("config needs at least one model");
  if (trials == 0) fail("trials must be at least 1");
  if (trials > 0xffffffffULL) fail("trials must be below 2^32");
  if (n_range.step == 0 || n_range.start == 0 || n_range.values().empty()) {
    fail("n_range must be a nonempty range of positive integers with positive step");
  }
  if (experiment == ExperimentKind::MinSampleVsDim) {
    if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0, 1)");
    if (m_cap != 0) {
      for (std::size_t n : n_range.values())
        if (m_cap < n) fail("m_cap must be at least every n");
    }
  } else {
    if (n_range.values().size() != 1) fail("log_error_vs_m takes a single n (n_range start == stop)");
    if (m_range.step == 0 || m_range.start == 0 || m_range.values().empty()) {
      fail("m_range must be a nonempty range of positive integers with positive step");
    }
  }
  if (sigma) {
    for (std::size_t n : n_range.values())
      if (sigma->rows() != n) fail("sigma dimension must equal every n in n_range");
    SpdMatrix check(*sigma);
    (void)check;
  }
}

FitResult ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::InvalidInputs, "ols_fit: xs and ys differ in length");
  if (xs.size() < 3) throw Error(ErrorCode::InvalidInputs, "ols_fit: need at least 3 points");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidInputs, "ols_fit: xs are all equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0.0) {
    f.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (f.slope * xs[i] + f.intercept);
      ss_res += r * r;
    }
    f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return f;
}

std::size_t min_sample_size_trial(Prng& rng, std::size_t n, const ModelDescriptor& model,
                                  const SpdMatrix& sigma, double eta, std::size_t m_cap) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidInputs, "eta must lie in (0, 1)");
  if (m_cap < n) throw Error(ErrorCode::InvalidInputs, "m_cap must be at least n");
  double last = kNaN;
  for (std::size_t m = 1; m <= m_cap; ++m) {
    const ShapeModel shape = probe_model(model, m, rng);
    const DenseMatrix x = sample_x(rng, n, m, sigma);
    const DenseMatrix y = shape.apply_lambda(x);
    const ThresholdCheck check = relative_frobenius_within(y, sigma, eta);
    if (check.passed) return m;
    last = check.error;
  }
  throw CapExceeded(m_cap, last);
}

std::optional<std::size_t> min_sample_trial_at(const ExperimentConfig& cfg, const ModelDescriptor& model,
                                               std::size_t n, std::size_t cell, std::size_t trial) {
  Prng rng = split(cfg.master_seed, cell_stream(cell, trial));
  const SpdMatrix sigma = sigma_for(cfg, n);
  const std::size_t cap = cfg.m_cap == 0 ? default_m_cap(n) : cfg.m_cap;
  try {
    return min_sample_size_trial(rng, n, model, sigma, cfg.eta, cap);
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
}

LogErrorTrial log_error_trial_at(const ExperimentConfig& cfg, const ModelDescriptor& model, std::size_t n,
                                 std::size_t m, std::size_t cell, std::size_t trial) {
  Prng rng = split(cfg.master_seed, cell_stream(cell, trial));
  const SpdMatrix sigma = sigma_for(cfg, n);
  const ShapeModel shape = probe_model(model, m, rng);
  const SampleBatch batch = correlate(sample_x(rng, n, m, sigma), shape);
  const CovEstimate est = sample_covariance(batch);
  double bound = kNaN;
  if (model.kind == ModelKind::RandomDiagonal) {
    bound = thm2_expectation(inputs_from_model(shape, sigma, false)).expectation_bound;
  }
  return {spectral_error(est, sigma), bound};
}

ExperimentResult run_min_sample_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::MinSampleVsDim) {
    throw Error(ErrorCode::InvalidConfig, "run_min_sample_experiment needs a min_sample_vs_dim config");
  }
  ExperimentResult result;
  result.name = cfg.name;
  result.config = cfg;
  result.experiment = cfg.experiment;
  const auto ns = cfg.n_range.values();

  for (const ModelDescriptor& model : cfg.models) {
    const std::string id = model.to_string();
    result.model_ids.push_back(id);
    std::vector<double> fit_x, fit_y;
    for (std::size_t cell = 0; cell < ns.size(); ++cell) {
      const std::size_t n = ns[cell];
      std::vector<std::optional<std::size_t>> outcomes(cfg.trials);
      parallel_for(cfg.trials, opts.threads,
                   [&](std::size_t t) { outcomes[t] = min_sample_trial_at(cfg, model, n, cell, t); });

      std::vector<double> values;
      values.reserve(cfg.trials);
      for (const auto& o : outcomes)
        if (o) values.push_back(static_cast<double>(*o));
      const MeanStderr ms = mean_stderr(values);
      MinSampleRecord rec{id, n, ms.mean, ms.stderr_, cfg.trials - values.size(), cfg.trials};
      if (rec.censored * 100 > cfg.trials) {
        std::ostringstream os;
        os << id << " n=" << n << ": " << rec.censored << " of " << cfg.trials
           << " trials hit the sample-size cap; mean uses uncensored trials only";
        result.warnings.push_back(os.str());
      }
      if (!values.empty()) {
        fit_x.push_back(static_cast<double>(n));
        fit_y.push_back(ms.mean);
      }
      if (opts.progress) {
        opts.progress(cfg.name + " " + id + " n=" + std::to_string(n) + " mean_min_m=" + format_g(ms.mean));
      }
      result.min_sample.push_back(std::move(rec));
    }
    if (fit_x.size() >= 3) result.fits.push_back({id, ols_fit(fit_x, fit_y)});
  }
  return result;
}

ExperimentResult run_log_error_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::LogErrorVsM) {
    throw Error(ErrorCode::InvalidConfig, "run_log_error_experiment needs a log_error_vs_m config");
  }
  ExperimentResult result;
  result.name = cfg.name;
  result.config = cfg;
  result.experiment = cfg.experiment;
  const std::size_t n = cfg.n_range.start;
  result.n = n;
  const auto ms = cfg.m_range.values();
  const SpdMatrix sigma = sigma_for(cfg, n);

  for (const ModelDescriptor& model : cfg.models) {
    const std::string id = model.to_string();
    result.model_ids.push_back(id);
    std::vector<double> fit_x, fit_y;
    for (std::size_t cell = 0; cell < ms.size(); ++cell) {
      const std::size_t m = ms[cell];
      std::vector<LogErrorTrial> trials(cfg.trials);
      parallel_for(cfg.trials, opts.threads,
                   [&](std::size_t t) { trials[t] = log_error_trial_at(cfg, model, n, m, cell, t); });

      std::vector<double> errors(cfg.trials);
      std::transform(trials.begin(), trials.end(), errors.begin(), [](const LogErrorTrial& t) { return t.error; });
      const MeanStderr es = mean_stderr(errors);

      LogErrorRecord rec;
      rec.model_id = id;
      rec.m = m;
      rec.mean_spectral_error = es.mean;
      rec.stderr_spectral_error = es.stderr_;
      rec.log10_mean_error = std::log10(es.mean);
      if (model.kind == ModelKind::RandomDiagonal) {
        std::vector<double> bounds(cfg.trials);
        std::transform(trials.begin(), trials.end(), bounds.begin(), [](const LogErrorTrial& t) { return t.bound; });
        rec.theoretical_bound = mean_stderr(bounds).mean;
        rec.theoretical_bound_analytic = kNaN;
      } else {
        const ShapeModel shape = model.instantiate(m);
        rec.theoretical_bound = thm2_expectation(inputs_from_model(shape, sigma, false)).expectation_bound;
        rec.theoretical_bound_analytic =
            thm2_expectation(inputs_from_model(shape, sigma, true)).expectation_bound;
      }
      if (!(rec.mean_spectral_error <= rec.theoretical_bound)) {
        result.bound_respected = false;
        std::ostringstream os;
        os << id << " m=" << m << ": mean error " << rec.mean_spectral_error << " exceeds bound "
           << rec.theoretical_bound;
        result.warnings.push_back(os.str());
      }
      fit_x.push_back(std::log10(static_cast<double>(m)));
      fit_y.push_back(rec.log10_mean_error);
      if (opts.progress) {
        opts.progress(cfg.name + " " + id + " m=" + std::to_string(m) + " mean_error=" + format_g(es.mean));
      }
      result.log_error.push_back(std::move(rec));
    }
    if (fit_x.size() >= 3) result.fits.push_back({id, ols_fit(fit_x, fit_y)});
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  return cfg.experiment == ExperimentKind::MinSampleVsDim ? run_min_sample_experiment(cfg, opts)
                                                          : run_log_error_experiment(cfg, opts);
}

std::vector<ExperimentConfig> paper_configs(double scale, std::uint64_t seed) {
  if (!(scale > 0.0 && scale <= 1.0)) throw Error(ErrorCode::InvalidConfig, "scale must lie in (0, 1]");
  const std::size_t trials = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(500.0 * scale)));
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  const double half_sqrt2 = std::numbers::sqrt2 / 2.0;

  ExperimentConfig fig1;
  fig1.name = "fig1";
  fig1.experiment = ExperimentKind::MinSampleVsDim;
  fig1.models = {ModelDescriptor{ModelKind::Identity},
                 ModelDescriptor{ModelKind::RandomDiagonal, 0.0, half_sqrt3, 0.5},
                 ModelDescriptor{ModelKind::RandomDiagonal, 0.0, half_sqrt2, half_sqrt2},
                 ModelDescriptor{ModelKind::RandomDiagonal, 0.0, 0.0, 1.0}};
  fig1.n_range = {1, 30, 1};
  fig1.eta = 0.2;
  fig1.trials = trials;
  fig1.master_seed = seed;

  ExperimentConfig fig2 = fig1;
  fig2.name = "fig2";
  fig2.models = {ModelDescriptor{ModelKind::Identity}, ModelDescriptor{ModelKind::Toeplitz, 0.25},
                 ModelDescriptor{ModelKind::Toeplitz, 0.5}, ModelDescriptor{ModelKind::Toeplitz, 0.75}};

  ExperimentConfig fig3;
  fig3.name = "fig3";
  fig3.experiment = ExperimentKind::LogErrorVsM;
  fig3.models = fig2.models;
  fig3.n_range = {15, 15, 1};
  fig3.m_range = {50, 1000, 50};
  fig3.trials = trials;
  fig3.master_seed = seed;

  return {fig1, fig2, fig3};
}

std::vector<DominanceRow> bound_dominance_grid(std::span<const ModelDescriptor> models,
                                               std::span<const std::size_t> ns) {
  std::vector<DominanceRow> rows;
  for (const ModelDescriptor& d : models) {
    for (std::size_t n : ns) {
      const std::size_t m = 10 * n;
      const ShapeModel shape = d.instantiate(m);
      BoundInputs in;
      const ShapeNorms norms = shape.numeric_norms();
      in.n = n;
      in.m = m;
      in.b_trace = norms.trace;
      in.b_frobenius = norms.frobenius;
      in.b_spectral = norms.spectral;
      in.sigma_spectral = 1.0;
      in.validate();
      DominanceRow row{d.to_string(), n, m, thm2_expectation(in).expectation_bound, soloveychik_expectation(in)};
      row.dominates = row.thm2 < row.soloveychik;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace corrcov
