#include "corrcov/corrcov.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "corrcov/bounds.hpp"
#include "corrcov/error.hpp"
#include "corrcov/experiments.hpp"
#include "corrcov/io.hpp"
#include "corrcov/shape_models.hpp"

struct corrcov_model {
  corrcov::ShapeModel model;
};

struct corrcov_experiment {
  corrcov::ExperimentConfig config;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string g_last_error;

corrcov_status status_of(corrcov::ErrorCode code) {
  using corrcov::ErrorCode;
  switch (code) {
    case ErrorCode::DimensionMismatch: return CORRCOV_E_DIMENSION_MISMATCH;
    case ErrorCode::NotPositiveDefinite: return CORRCOV_E_NOT_POSITIVE_DEFINITE;
    case ErrorCode::NotSymmetric: return CORRCOV_E_NOT_SYMMETRIC;
    case ErrorCode::NonFinite: return CORRCOV_E_NON_FINITE;
    case ErrorCode::ConvergenceFailure: return CORRCOV_E_CONVERGENCE_FAILURE;
    case ErrorCode::OracleSizeExceeded: return CORRCOV_E_ORACLE_SIZE_EXCEEDED;
    case ErrorCode::InvalidModel: return CORRCOV_E_INVALID_MODEL;
    case ErrorCode::NoAnalyticForm: return CORRCOV_E_NO_ANALYTIC_FORM;
    case ErrorCode::InvalidInputs: return CORRCOV_E_INVALID_INPUTS;
    case ErrorCode::CapExceeded: return CORRCOV_E_CAP_EXCEEDED;
    case ErrorCode::InvalidConfig: return CORRCOV_E_INVALID_CONFIG;
    case ErrorCode::ParseError: return CORRCOV_E_PARSE;
    case ErrorCode::IoError: return CORRCOV_E_IO;
  }
  return CORRCOV_E_INTERNAL;
}

corrcov_status fail(corrcov_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
corrcov_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CORRCOV_OK;
  } catch (const corrcov::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CORRCOV_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CORRCOV_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CORRCOV_E_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

double* dup_matrix(const corrcov::DenseMatrix& a) {
  const auto e = a.entries();
  double* p = static_cast<double*>(std::malloc(e.size() * sizeof(double)));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, e.data(), e.size() * sizeof(double));
  return p;
}

corrcov::RunOptions run_options(unsigned threads, corrcov_progress_fn progress, void* user) {
  corrcov::RunOptions opts;
  opts.threads = threads;
  if (progress) opts.progress = [progress, user](const std::string& line) { progress(line.c_str(), user); };
  return opts;
}

#define CORRCOV_REQUIRE(ptr)                                                     \
  do {                                                                           \
    if (!(ptr)) return fail(CORRCOV_E_NULL_ARGUMENT, #ptr " must not be NULL"); \
  } while (0)

}  // namespace

extern "C" {

const char* corrcov_version(void) { return "1.0.0"; }

const char* corrcov_status_name(corrcov_status status) {
  switch (status) {
    case CORRCOV_OK: return "Ok";
    case CORRCOV_E_NULL_ARGUMENT: return "NullArgument";
    case CORRCOV_E_INTERNAL: return "Internal";
    default: break;
  }
  using corrcov::ErrorCode;
  for (ErrorCode c : {ErrorCode::DimensionMismatch, ErrorCode::NotPositiveDefinite, ErrorCode::NotSymmetric,
                      ErrorCode::NonFinite, ErrorCode::ConvergenceFailure, ErrorCode::OracleSizeExceeded,
                      ErrorCode::InvalidModel, ErrorCode::NoAnalyticForm, ErrorCode::InvalidInputs,
                      ErrorCode::CapExceeded, ErrorCode::InvalidConfig, ErrorCode::ParseError, ErrorCode::IoError}) {
    if (status_of(c) == status) return corrcov::to_string(c);
  }
  return "Unknown";
}

const char* corrcov_last_error(void) { return g_last_error.c_str(); }

void corrcov_string_free(char* s) { std::free(s); }
void corrcov_buffer_free(double* p) { std::free(p); }

corrcov_status corrcov_model_create(const char* descriptor, size_t m, uint64_t seed, corrcov_model** out) {
  CORRCOV_REQUIRE(descriptor);
  CORRCOV_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    if (m == 0) throw corrcov::Error(corrcov::ErrorCode::InvalidModel, "m must be at least 1");
    *out = new corrcov_model{corrcov::ModelDescriptor::parse(descriptor).instantiate(m, seed)};
  });
}

void corrcov_model_destroy(corrcov_model* model) { delete model; }

corrcov_status corrcov_model_m(const corrcov_model* model, size_t* out) {
  CORRCOV_REQUIRE(model);
  CORRCOV_REQUIRE(out);
  *out = model->model.m();
  return CORRCOV_OK;
}

corrcov_status corrcov_model_norms(const corrcov_model* model, int analytic, corrcov_norms* out) {
  CORRCOV_REQUIRE(model);
  CORRCOV_REQUIRE(out);
  return guarded([&] {
    const auto n = analytic ? model->model.analytic_norms() : model->model.numeric_norms();
    *out = corrcov_norms{n.trace, n.frobenius, n.spectral, n.exact ? 1 : 0};
  });
}

corrcov_status corrcov_model_b(const corrcov_model* model, double** out) {
  CORRCOV_REQUIRE(model);
  CORRCOV_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_matrix(model->model.materialize_b()); });
}

corrcov_status corrcov_model_lambda(const corrcov_model* model, double** out) {
  CORRCOV_REQUIRE(model);
  CORRCOV_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_matrix(model->model.materialize_lambda()); });
}

corrcov_status corrcov_bound_json(const corrcov_bound_request* request, char** out_json) {
  CORRCOV_REQUIRE(request);
  CORRCOV_REQUIRE(request->model);
  CORRCOV_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded([&] {
    using namespace corrcov;
    const auto& rq = *request;
    if (rq.n == 0 || rq.m == 0) throw Error(ErrorCode::InvalidInputs, "n and m must be at least 1");
    const ModelDescriptor desc = ModelDescriptor::parse(rq.model);
    const ShapeModel model = desc.instantiate(rq.m, rq.seed);

    std::string sigma_source = "identity";
    SpdMatrix sigma = SpdMatrix::identity(rq.n);
    if (rq.sigma) {
      sigma = SpdMatrix(DenseMatrix(rq.n, rq.n, std::vector<double>(rq.sigma, rq.sigma + rq.n * rq.n)));
      sigma_source = "matrix";
    } else if (rq.sigma_path) {
      DenseMatrix s = load_sigma_file(rq.sigma_path);
      if (s.rows() != rq.n) {
        throw Error(ErrorCode::DimensionMismatch, "sigma is " + std::to_string(s.rows()) + "x" +
                                                      std::to_string(s.cols()) + " but n = " + std::to_string(rq.n));
      }
      sigma = SpdMatrix(std::move(s));
      sigma_source = rq.sigma_path;
    }

    const double delta = rq.has_delta ? rq.delta : delta_for_probability(0.05, rq.n);
    std::optional<PaulinParams> paulin;
    if (rq.has_paulin) paulin = PaulinParams{rq.paulin_l, rq.paulin_entry_sigma};

    BoundReport r = evaluate_bounds(inputs_from_model(model, sigma, rq.analytic != 0), delta, paulin);
    r.metadata.emplace_back("model", desc.to_string());
    r.metadata.emplace_back("sigma", sigma_source);
    r.metadata.emplace_back("delta_source", rq.has_delta ? "given" : "tail probability bound 0.05");
    if (desc.kind == ModelKind::RandomDiagonal) r.metadata.emplace_back("seed", std::to_string(rq.seed));
    *out_json = dup_string(bound_report_json(r));
  });
}

corrcov_status corrcov_experiment_load(const char* path, corrcov_experiment** out) {
  CORRCOV_REQUIRE(path);
  CORRCOV_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new corrcov_experiment{corrcov::load_experiment_config(path), {}}; });
}

corrcov_status corrcov_experiment_parse(const char* json_text, corrcov_experiment** out) {
  CORRCOV_REQUIRE(json_text);
  CORRCOV_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new corrcov_experiment{corrcov::parse_experiment_config(json_text), {}}; });
}

void corrcov_experiment_destroy(corrcov_experiment* exp) { delete exp; }

corrcov_status corrcov_experiment_set_seed(corrcov_experiment* exp, uint64_t seed) {
  CORRCOV_REQUIRE(exp);
  exp->config.master_seed = seed;
  return CORRCOV_OK;
}

corrcov_status corrcov_experiment_set_trials(corrcov_experiment* exp, size_t trials) {
  CORRCOV_REQUIRE(exp);
  if (trials == 0) return fail(CORRCOV_E_INVALID_CONFIG, "trials must be at least 1");
  exp->config.trials = trials;
  return CORRCOV_OK;
}

corrcov_status corrcov_experiment_run(corrcov_experiment* exp, const char* out_dir, unsigned threads,
                                      corrcov_progress_fn progress, void* user, char** out_json) {
  CORRCOV_REQUIRE(exp);
  if (out_json) *out_json = nullptr;
  return guarded([&] {
    exp->warnings.clear();
    const auto result = corrcov::run_experiment(exp->config, run_options(threads, progress, user));
    exp->warnings = result.warnings;
    if (out_dir) corrcov::write_experiment_outputs(result, out_dir);
    if (out_json) *out_json = dup_string(corrcov::experiment_result_json(result));
  });
}

size_t corrcov_experiment_warning_count(const corrcov_experiment* exp) { return exp ? exp->warnings.size() : 0; }

const char* corrcov_experiment_warning(const corrcov_experiment* exp, size_t index) {
  if (!exp || index >= exp->warnings.size()) return nullptr;
  return exp->warnings[index].c_str();
}

corrcov_status corrcov_reproduce_paper(const char* out_dir, uint64_t seed, double scale, unsigned threads,
                                       corrcov_progress_fn progress, void* user, char** out_summary_json) {
  CORRCOV_REQUIRE(out_dir);
  if (out_summary_json) *out_summary_json = nullptr;
  return guarded([&] {
    corrcov::reproduce_paper(out_dir, seed, scale, run_options(threads, progress, user));
    if (out_summary_json) {
      *out_summary_json = dup_string(corrcov::read_text_file(std::filesystem::path(out_dir) / "summary.json"));
    }
  });
}

}  // extern "C"
