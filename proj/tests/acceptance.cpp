// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fail. With arguments, runs only the listed criteria.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "corrcov/bounds.hpp"
#include "corrcov/estimator.hpp"
#include "corrcov/experiments.hpp"
#include "corrcov/sampling.hpp"
#include "corrcov/shape_models.hpp"
#include "json.hpp"

using namespace corrcov;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = "'" CORRCOV_CLI_PATH "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

ExperimentConfig min_sample_config(const std::vector<ModelDescriptor>& models) {
  ExperimentConfig cfg;
  cfg.name = "acceptance_min_sample";
  cfg.experiment = ExperimentKind::MinSampleVsDim;
  cfg.models = models;
  cfg.n_range = {5, 30, 5};
  cfg.eta = 0.2;
  cfg.trials = 100;
  cfg.master_seed = kSeed;
  return cfg;
}

ExperimentConfig divergence_config() {
  ExperimentConfig cfg;
  cfg.name = "acceptance_divergence";
  cfg.experiment = ExperimentKind::LogErrorVsM;
  cfg.models = {ModelDescriptor{ModelKind::Identity}, ModelDescriptor{ModelKind::Toeplitz, 0.25},
                ModelDescriptor{ModelKind::Toeplitz, 0.5}, ModelDescriptor{ModelKind::Toeplitz, 0.75},
                ModelDescriptor{ModelKind::AllOnes}};
  cfg.n_range = {15, 15, 1};
  cfg.m_range = {50, 1000, 50};
  cfg.trials = 100;
  cfg.master_seed = kSeed;
  return cfg;
}

const ExperimentResult& divergence_result() {
  static const ExperimentResult r = run_experiment(divergence_config());
  return r;
}

std::string slopes_text(const ExperimentResult& r) {
  std::string s;
  for (const auto& f : r.fits) s += fmt("%s%s %.3f (R2 %.3f)", s.empty() ? "" : ", ", f.model_id.c_str(), f.fit.slope, f.fit.r_squared);
  return s;
}

// 1. Closed-form bound values through the command-line tool.
Outcome bound_exactness() {
  const auto id = cli("bound --n 15 --m 100 --model identity");
  if (id.code != 0) return {false, "bound command failed"};
  const double got = json::parse(id.out)["expectation_bound"].get<double>();
  const double want = 72.0 * std::sqrt(0.15) + 42.3;
  bool pass = rel(got, want) <= 1e-12;
  std::string detail = fmt("identity %.15g vs %.15g (rel %.1e)", got, want, rel(got, want));
  const double ones_want = 72.0 * std::sqrt(15.0) + 282.0 * 15.0;
  double worst = 0.0;
  for (int m : {1, 2, 10, 100, 777, 1000, 5000}) {
    for (const char* flag : {"", " --analytic"}) {
      const auto r = cli(fmt("bound --n 15 --m %d --model all_ones%s", m, flag));
      if (r.code != 0) return {false, "bound command failed for all_ones"};
      worst = std::max(worst, rel(json::parse(r.out)["expectation_bound"].get<double>(), ones_want));
    }
  }
  pass = pass && worst <= 1e-12;
  detail += fmt("; all_ones over m in 1..5000 within %.1e of 72 sqrt(15) + 282*15", worst);
  return {pass, detail};
}

// 2. Mean of the estimate is tr(B)/m times Sigma, entrywise within 4 SE.
Outcome mean_identity() {
  const DenseMatrix sigma_m = DenseMatrix::from_rows({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  const SpdMatrix sigma(sigma_m);
  const std::size_t n = 3, m = 5, trials = 100000;
  bool pass = true;
  double worst_z = 0.0;
  for (const char* d : {"identity", "toeplitz:0.5", "all_ones", "random_diag:0.5,1"}) {
    const auto model = ModelDescriptor::parse(d).instantiate(m, kSeed);
    const double scale = model.numeric_norms().trace / static_cast<double>(m);
    std::vector<double> sum(n * n, 0.0), sum_sq(n * n, 0.0);
    Prng rng(kSeed, 2);
    for (std::size_t t = 0; t < trials; ++t) {
      const auto s = sample_covariance(correlate(sample_x(rng, n, m, sigma), model)).sigma_hat;
      for (std::size_t k = 0; k < n * n; ++k) {
        sum[k] += s.entries()[k];
        sum_sq[k] += s.entries()[k] * s.entries()[k];
      }
    }
    for (std::size_t k = 0; k < n * n; ++k) {
      const double mean = sum[k] / trials;
      const double se = std::sqrt((sum_sq[k] / trials - mean * mean) / (trials - 1.0));
      const double target = scale * sigma_m.entries()[k];
      const double z = se > 0.0 ? std::abs(mean - target) / se : (mean == target ? 0.0 : INFINITY);
      worst_z = std::max(worst_z, z);
      pass = pass && z <= 4.0;
    }
  }
  return {pass, fmt("4 models x 9 entries, 1e5 trials, largest deviation %.2f SE", worst_z)};
}

// 3. Mean spectral error never exceeds the expectation bound, over every
// log-error cell run here.
Outcome bound_never_violated() {
  std::vector<ExperimentConfig> configs = {divergence_config()};
  ExperimentConfig fig1_models = divergence_config();
  fig1_models.name = "acceptance_random_diag";
  fig1_models.models = {ModelDescriptor::parse("random_diag:0.8660254037844386,0.5"),
                        ModelDescriptor::parse("random_diag:0.7071067811865476,0.7071067811865476"),
                        ModelDescriptor::parse("random_diag:0,1"), ModelDescriptor::parse("random_diag:0.5,0.5")};
  configs.push_back(fig1_models);
  for (std::size_t n : {1u, 2u, 5u, 30u}) {
    ExperimentConfig c = divergence_config();
    c.name = "acceptance_small";
    c.models.push_back(ModelDescriptor::parse("random_diag:0,1"));
    c.n_range = {n, n, 1};
    c.m_range = {1, 201, 20};
    c.trials = 50;
    configs.push_back(c);
  }
  ExperimentConfig tri = divergence_config();
  tri.name = "acceptance_sigma";
  tri.n_range = {3, 3, 1};
  tri.m_range = {2, 102, 20};
  tri.sigma = DenseMatrix::from_rows({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  configs.push_back(tri);

  std::size_t cells = 0, violations = 0;
  double worst_ratio = 0.0;
  for (const auto& cfg : configs) {
    const auto r = cfg.name == "acceptance_divergence" ? divergence_result() : run_experiment(cfg);
    for (const auto& rec : r.log_error) {
      ++cells;
      const double ratio = rec.mean_spectral_error / rec.theoretical_bound;
      worst_ratio = std::max(worst_ratio, ratio);
      if (!(rec.mean_spectral_error <= rec.theoretical_bound)) ++violations;
      if (!std::isnan(rec.theoretical_bound_analytic) && !(rec.mean_spectral_error <= rec.theoretical_bound_analytic))
        ++violations;
    }
    if (!r.bound_respected) ++violations;
  }
  return {violations == 0 && cells > 0,
          fmt("%zu cells, %zu violations, largest error/bound ratio %.4f", cells, violations, worst_ratio)};
}

// 4. Exceedance frequency of the tail threshold stays below its probability bound.
Outcome tail_bound() {
  const std::size_t n = 2, m = 50, trials = 10000;
  const double delta = 2.5;
  const auto model = ShapeModel::identity(m);
  const auto sigma = SpdMatrix::identity(n);
  const auto tail = thm1_tail(inputs_from_model(model, sigma, false), delta);
  std::size_t exceed = 0;
  Prng rng(kSeed, 4);
  double largest = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    // tr(B) = m, so E W = Sigma and the deviation is the spectral error.
    const double dev = spectral_error(sample_covariance(correlate(sample_x(rng, n, m, sigma), model)), sigma);
    largest = std::max(largest, dev);
    exceed += dev > tail.threshold;
  }
  const double freq = static_cast<double>(exceed) / trials;
  return {tail.prob_bound < 1.0 && freq <= tail.prob_bound,
          fmt("threshold %.4g, frequency %.4g <= bound %.4g (largest deviation %.4g)", tail.threshold, freq,
              tail.prob_bound, largest)};
}

Outcome linear_sample_complexity(const std::vector<ModelDescriptor>& models, const char* order) {
  const auto r = run_experiment(min_sample_config(models));
  bool pass = r.fits.size() == models.size();
  for (std::size_t i = 0; pass && i < r.fits.size(); ++i) {
    pass = r.fits[i].fit.r_squared >= 0.9;
    if (i > 0) pass = pass && r.fits[i].fit.slope > r.fits[i - 1].fit.slope;
  }
  for (const auto& rec : r.min_sample) pass = pass && rec.censored == 0;
  return {pass, fmt("slopes increasing in %s, R2 >= 0.9: %s", order, slopes_text(r).c_str())};
}

// 5. Toeplitz models: minimal m linear in n with slopes increasing in theta.
Outcome toeplitz_linearity() {
  return linear_sample_complexity({ModelDescriptor{ModelKind::Identity}, ModelDescriptor{ModelKind::Toeplitz, 0.25},
                                   ModelDescriptor{ModelKind::Toeplitz, 0.5}, ModelDescriptor{ModelKind::Toeplitz, 0.75}},
                                  "theta");
}

// 6. Random diagonal scale models: slopes increasing with sigma.
Outcome scale_model_linearity() {
  return linear_sample_complexity({ModelDescriptor{ModelKind::Identity},
                                   ModelDescriptor::parse("random_diag:0.8660254037844386,0.5"),
                                   ModelDescriptor::parse("random_diag:0.7071067811865476,0.7071067811865476"),
                                   ModelDescriptor::parse("random_diag:0,1")},
                                  "sigma");
}

// 7. Log-log error slopes near -1/2 and parallel; the all-ones curve is flat.
Outcome divergence_rate() {
  const auto& r = divergence_result();
  std::vector<double> slopes;
  bool pass = true;
  for (const auto& f : r.fits) {
    if (f.model_id == "all_ones") continue;
    slopes.push_back(f.fit.slope);
    pass = pass && f.fit.slope >= -0.6 && f.fit.slope <= -0.4;
  }
  pass = pass && slopes.size() == 4;
  const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
  const double spread = slopes.empty() ? INFINITY : *hi - *lo;
  pass = pass && spread <= 0.1;
  double first = NAN, last = NAN;
  for (const auto& rec : r.log_error) {
    if (rec.model_id != "all_ones") continue;
    if (rec.m == 50) first = rec.log10_mean_error;
    if (rec.m == 1000) last = rec.log10_mean_error;
  }
  const double drift = std::abs(last - first);
  pass = pass && drift <= 0.05;
  std::string text;
  for (const auto& f : r.fits)
    if (f.model_id != "all_ones") text += fmt("%s%s %.3f", text.empty() ? "" : ", ", f.model_id.c_str(), f.fit.slope);
  return {pass, fmt("slopes %s; spread %.3f; all_ones |log10 change| m=50..1000 %.4f", text.c_str(), spread, drift)};
}

// 8. Toeplitz Frobenius identity and spectral upper bound on materialized matrices.
Outcome toeplitz_identities() {
  double worst_fro = 0.0, worst_spec = 0.0;
  bool pass = true;
  for (std::size_t m : {2u, 10u, 100u}) {
    for (double theta : {0.25, 0.5, 0.75}) {
      const auto b = ShapeModel::toeplitz(theta, m).materialize_b();
      const double f = rel(frobenius_norm(b), toeplitz_frobenius_exact(theta, m));
      const double s = spectral_norm(b) / toeplitz_spectral_upper(theta);
      worst_fro = std::max(worst_fro, f);
      worst_spec = std::max(worst_spec, s);
      pass = pass && f <= 1e-10 && s <= 1.0;
    }
  }
  return {pass, fmt("Frobenius rel error <= %.1e; spectral / ((1+theta)/(1-theta)) <= %.4f", worst_fro, worst_spec)};
}

// 9. Expectation bound below the Soloveychik bound on the grid m = 10 n.
Outcome dominance() {
  const std::vector<ModelDescriptor> models = {ModelDescriptor{ModelKind::Identity},
                                               ModelDescriptor{ModelKind::Toeplitz, 0.5}};
  const std::vector<std::size_t> ns = {10, 50, 100, 500};
  const auto rows = bound_dominance_grid(models, ns);
  bool pass = rows.size() == 8;
  double worst = 0.0;
  for (const auto& r : rows) {
    pass = pass && r.dominates && r.thm2 < r.soloveychik;
    worst = std::max(worst, r.thm2 / r.soloveychik);
  }
  return {pass, fmt("%zu grid points, largest ratio to the Soloveychik bound %.4f", rows.size(), worst)};
}

// 10. reproduce-paper is byte-identical across runs and thread counts.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "corrcov_acceptance_repro";
  fs::remove_all(root);
  const fs::path a = root / "threads1", b = root / "threads4";
  const auto ra = cli("reproduce-paper --scale 0.02 --seed 7 --quiet --threads 1 --out '" + a.string() + "'");
  const auto rb = cli("reproduce-paper --scale 0.02 --seed 7 --quiet --threads 4 --out '" + b.string() + "'");
  if (ra.code != 0 || rb.code != 0) return {false, fmt("reproduce-paper exit codes %d, %d", ra.code, rb.code)};
  std::map<std::string, std::string> fa, fb;
  for (const auto& e : fs::directory_iterator(a)) fa[e.path().filename().string()] = slurp(e.path());
  for (const auto& e : fs::directory_iterator(b)) fb[e.path().filename().string()] = slurp(e.path());
  std::size_t csv = 0, svg = 0, js = 0;
  for (const auto& [name, _] : fa) {
    const auto ext = fs::path(name).extension();
    csv += ext == ".csv";
    svg += ext == ".svg";
    js += ext == ".json";
  }
  const bool expected = fa.count("fig1.svg") && fa.count("fig2.svg") && fa.count("fig3.svg") &&
                        fa.count("bounds.json") && fa.count("summary.json");
  const bool same = fa == fb && ra.out == rb.out;
  fs::remove_all(root);
  return {same && expected && csv > 0,
          fmt("%zu CSV, %zu SVG, %zu JSON files; %s across --threads 1 and 4", csv, svg, js,
              same ? "byte-identical" : "DIFFERENT")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "bound-formula exactness", bound_exactness},
      {2, "mean identity", mean_identity},
      {3, "bound never violated", bound_never_violated},
      {4, "tail bound honored", tail_bound},
      {5, "linearity of sample complexity (Toeplitz)", toeplitz_linearity},
      {6, "time-variant scale models", scale_model_linearity},
      {7, "divergence rate", divergence_rate},
      {8, "Toeplitz norm identities", toeplitz_identities},
      {9, "bound dominance", dominance},
      {10, "determinism", determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
