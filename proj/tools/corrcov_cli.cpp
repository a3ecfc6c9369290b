// corrcov command-line tool: bound evaluation and the Monte Carlo experiments.
// Links only against the C interface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "corrcov/corrcov.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

int exit_code(corrcov_status s) {
  switch (s) {
    case CORRCOV_OK: return kExitOk;
    case CORRCOV_E_PARSE:
    case CORRCOV_E_INVALID_CONFIG:
    case CORRCOV_E_INVALID_MODEL:
    case CORRCOV_E_NULL_ARGUMENT: return kExitUsage;
    case CORRCOV_E_IO:
    case CORRCOV_E_INTERNAL: return kExitFailure;
    default: return kExitDomain;
  }
}

int report(corrcov_status s) {
  std::cerr << "corrcov: " << corrcov_status_name(s) << ": " << corrcov_last_error() << '\n';
  return exit_code(s);
}

void print_progress(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

// --seed wins, then CORRCOV_SEED; nullopt when neither is set.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  const char* env = std::getenv("CORRCOV_SEED");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || errno != 0 || env[0] == '-') {
    throw CLI::ValidationError("CORRCOV_SEED", std::string("not a nonnegative integer: '") + env + "'");
  }
  return static_cast<std::uint64_t>(v);
}

struct BoundArgs {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string model;
  std::string sigma_path;
  std::optional<double> delta;
  bool analytic = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> paulin_l;
  std::optional<double> paulin_entry_sigma;
};

struct ExperimentArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned threads = 0;
  bool quiet = false;
};

struct ReproduceArgs {
  std::string out = "paper_outputs";
  std::optional<std::uint64_t> seed;
  double scale = 1.0;
  unsigned threads = 0;
  bool quiet = false;
};

int run_bound(const BoundArgs& a) {
  if (a.paulin_l.has_value() != a.paulin_entry_sigma.has_value()) {
    std::cerr << "corrcov: --paulin-l and --paulin-entry-sigma must be given together\n";
    return kExitUsage;
  }
  corrcov_bound_request rq{};
  rq.n = a.n;
  rq.m = a.m;
  rq.model = a.model.c_str();
  rq.seed = resolve_seed(a.seed).value_or(0);
  rq.sigma_path = a.sigma_path.empty() ? nullptr : a.sigma_path.c_str();
  rq.has_delta = a.delta.has_value();
  rq.delta = a.delta.value_or(0.0);
  rq.analytic = a.analytic;
  rq.has_paulin = a.paulin_l.has_value();
  rq.paulin_l = a.paulin_l.value_or(0.0);
  rq.paulin_entry_sigma = a.paulin_entry_sigma.value_or(0.0);

  char* json = nullptr;
  if (auto s = corrcov_bound_json(&rq, &json); s != CORRCOV_OK) return report(s);
  std::cout << json << '\n';
  corrcov_string_free(json);
  return kExitOk;
}

int run_experiment(const ExperimentArgs& a) {
  corrcov_experiment* exp = nullptr;
  if (auto s = corrcov_experiment_load(a.config.c_str(), &exp); s != CORRCOV_OK) return report(s);
  std::unique_ptr<corrcov_experiment, decltype(&corrcov_experiment_destroy)> guard(exp, corrcov_experiment_destroy);
  if (auto seed = resolve_seed(a.seed)) corrcov_experiment_set_seed(exp, *seed);
  if (a.trials) {
    if (auto s = corrcov_experiment_set_trials(exp, *a.trials); s != CORRCOV_OK) return report(s);
  }
  auto s = corrcov_experiment_run(exp, a.out.c_str(), a.threads, a.quiet ? nullptr : print_progress, nullptr, nullptr);
  if (s != CORRCOV_OK) return report(s);
  for (std::size_t i = 0; i < corrcov_experiment_warning_count(exp); ++i) {
    std::cerr << "corrcov: warning: " << corrcov_experiment_warning(exp, i) << '\n';
  }
  return kExitOk;
}

int run_reproduce(const ReproduceArgs& a) {
  char* summary = nullptr;
  const std::uint64_t seed = resolve_seed(a.seed).value_or(0);
  auto s = corrcov_reproduce_paper(a.out.c_str(), seed, a.scale, a.threads, a.quiet ? nullptr : print_progress,
                                   nullptr, &summary);
  if (s != CORRCOV_OK) return report(s);
  const auto j = nlohmann::json::parse(summary);
  corrcov_string_free(summary);
  for (const auto& w : j.at("warnings")) std::cerr << "corrcov: warning: " << w.get<std::string>() << '\n';
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

const CLI::Validator kPositiveInt(
    [](std::string& text) -> std::string {
      std::size_t v = 0;
      if (!CLI::detail::lexical_cast(text, v) || v == 0) return "must be a positive integer, got " + text;
      return {};
    },
    "POSITIVE");

int main(int argc, char** argv) {
  CLI::App app{"Bounds and Monte Carlo experiments for covariance estimation from correlated samples", "corrcov"};
  app.require_subcommand(1);
  app.set_version_flag("--version", corrcov_version());

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "Evaluate the error bounds for one (n, m, model) and print JSON");
  bound->add_option("--n", ba.n, "Signal dimension")->required()->check(kPositiveInt);
  bound->add_option("--m", ba.m, "Number of samples")->required()->check(kPositiveInt);
  bound->add_option("--model", ba.model, "identity | toeplitz:<theta> | all_ones | random_diag:<mu>,<sigma>")
      ->required();
  bound->add_option("--sigma", ba.sigma_path, "JSON file with the n x n covariance as an array of rows")
      ->check(CLI::ExistingFile);
  bound->add_option("--delta", ba.delta, "Tail parameter; default gives tail probability bound 0.05")
      ->check(CLI::NonNegativeNumber);
  bound->add_flag("--analytic", ba.analytic, "Use closed-form norms of B instead of computing them");
  bound->add_option("--seed", ba.seed, "Seed for the random_diag draw (fallback: CORRCOV_SEED)");
  bound->add_option("--paulin-l", ba.paulin_l, "Entry bound L for the Paulin comparison");
  bound->add_option("--paulin-entry-sigma", ba.paulin_entry_sigma, "Entry standard deviation for the Paulin comparison");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment from a JSON config and write CSV, SVG, JSON");
  experiment->add_option("--config", ea.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", ea.out, "Output directory")->capture_default_str();
  experiment->add_option("--seed", ea.seed, "Master seed, overrides the config (fallback: CORRCOV_SEED)");
  experiment->add_option("--trials", ea.trials, "Trials per grid cell, overrides the config")
      ->check(kPositiveInt);
  experiment->add_option("--threads", ea.threads, "Worker threads (0: all cores)")->capture_default_str();
  experiment->add_flag("--quiet", ea.quiet, "No per-cell progress lines");

  ReproduceArgs ra;
  auto* reproduce = app.add_subcommand("reproduce-paper", "Run the three published experiments and write all outputs");
  reproduce->add_option("--out", ra.out, "Output directory")->capture_default_str();
  reproduce->add_option("--seed", ra.seed, "Master seed (fallback: CORRCOV_SEED, then 0)");
  reproduce->add_option("--scale", ra.scale, "Fraction of the 500 trials per cell, in (0, 1]")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  reproduce->add_option("--threads", ra.threads, "Worker threads (0: all cores)")->capture_default_str();
  reproduce->add_flag("--quiet", ra.quiet, "No per-cell progress lines");

  try {
    app.parse(argc, argv);
    if (bound->parsed()) return run_bound(ba);
    if (experiment->parsed()) return run_experiment(ea);
    return run_reproduce(ra);
  } catch (const CLI::CallForHelp&) {
    std::cout << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << corrcov_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "corrcov: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }
}
