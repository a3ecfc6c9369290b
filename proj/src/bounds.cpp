#include "corrcov/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "corrcov/error.hpp"

namespace corrcov {

namespace {

const double kLog3 = std::log(3.0);

void require_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidInputs, "delta must be a finite nonnegative number");
  }
}

double dev_threshold(const BoundInputs& in, double delta) {
  return (32.0 * in.b_frobenius * delta + 64.0 * in.b_spectral * delta * delta) /
         static_cast<double>(in.m) * in.sigma_spectral;
}

double tail_prob(std::size_t n, double delta) {
  return 2.0 * std::exp(-2.0 * delta * delta + 2.0 * static_cast<double>(n) * kLog3);
}

}  // namespace

const char* to_string(NormSource source) noexcept {
  return source == NormSource::NumericNorms ? "numeric" : "analytic";
}

void BoundInputs::validate() const {
  if (n == 0 || m == 0) throw Error(ErrorCode::InvalidInputs, "n and m must be at least 1");
  for (double v : {b_frobenius, b_spectral, b_trace, sigma_spectral}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidInputs, "bound inputs must be finite and nonnegative");
    }
  }
  if (source == NormSource::NumericNorms) {
    const double slack = 1e-9 * std::max(1.0, b_frobenius);
    const double root_m = std::sqrt(static_cast<double>(m));
    if (b_spectral > b_frobenius + slack || b_frobenius > root_m * b_spectral + slack) {
      std::ostringstream os;
      os << "inconsistent norms: need ||B|| <= ||B||_F <= sqrt(m) ||B||, got ||B|| = " << b_spectral
         << ", ||B||_F = " << b_frobenius << ", m = " << m;
      throw Error(ErrorCode::InvalidInputs, os.str());
    }
  }
}

TailBound thm1_tail(const BoundInputs& in, double delta) {
  require_delta(delta);
  return {dev_threshold(in, delta), tail_prob(in.n, delta)};
}

double thm1_expectation(const BoundInputs& in) {
  const double n = static_cast<double>(in.n);
  return (72.0 * in.b_frobenius * std::sqrt(n) + 282.0 * in.b_spectral * n) /
         static_cast<double>(in.m) * in.sigma_spectral;
}

double mean_shift_term(const BoundInputs& in) {
  return std::abs(in.b_trace / static_cast<double>(in.m) - 1.0) * in.sigma_spectral;
}

BoundReport thm2_expectation(const BoundInputs& in) {
  BoundReport r;
  r.inputs = in;
  r.mean_shift_term = mean_shift_term(in);
  r.concentration_term = thm1_expectation(in);
  r.expectation_bound = r.mean_shift_term + r.concentration_term;
  return r;
}

TailBound thm2_tail(const BoundInputs& in, double delta) {
  require_delta(delta);
  return {mean_shift_term(in) + dev_threshold(in, delta), tail_prob(in.n, delta)};
}

double soloveychik_expectation(const BoundInputs& in) {
  if (!(in.b_spectral > 0.0)) {
    throw Error(ErrorCode::InvalidInputs, "soloveychik bound divides by ||B||, which is zero");
  }
  const double n = static_cast<double>(in.n);
  const double c = std::ceil(std::log(2.0 * n));
  return 24.0 * c * c * std::sqrt(n) *
         (4.0 * in.b_spectral + std::sqrt(std::numbers::pi) * in.b_frobenius / in.b_spectral) /
         static_cast<double>(in.m) * in.sigma_spectral;
}

double paulin_expectation(const BoundInputs& in, double l_bound, double entry_sigma) {
  if (in.n < 2) throw Error(ErrorCode::InvalidInputs, "paulin bound needs n >= 2 (log n > 0)");
  if (!(l_bound > 0.0) || !(entry_sigma > 0.0)) {
    throw Error(ErrorCode::InvalidInputs, "paulin bound needs L > 0 and entry sigma > 0");
  }
  const double n = static_cast<double>(in.n);
  const double log_n = std::log(n);
  const double v = 44.0 * (n * entry_sigma * entry_sigma + l_bound * l_bound) * in.b_frobenius * in.b_frobenius;
  return (2.0 * std::sqrt(v * log_n) + 32.0 * std::sqrt(3.0) * l_bound * n * log_n * in.b_spectral) /
         static_cast<double>(in.m);
}

double delta_for_probability(double p, std::size_t n) {
  if (!(p > 0.0) || !(p <= 1.0)) throw Error(ErrorCode::InvalidInputs, "probability must lie in (0, 1]");
  return std::sqrt((2.0 * static_cast<double>(n) * kLog3 + std::log(2.0 / p)) / 2.0);
}

BoundInputs inputs_from_model(const ShapeModel& model, const SpdMatrix& sigma, bool use_analytic) {
  const ShapeNorms norms = use_analytic ? model.analytic_norms() : model.numeric_norms();
  BoundInputs in;
  in.n = sigma.dim();
  in.m = model.m();
  in.b_trace = norms.trace;
  in.b_frobenius = norms.frobenius;
  in.b_spectral = norms.spectral;
  in.sigma_spectral = sigma.is_identity() ? 1.0 : spectral_norm(sigma.matrix());
  in.source = use_analytic ? NormSource::AnalyticNorms : NormSource::NumericNorms;
  in.validate();
  return in;
}

BoundReport evaluate_bounds(const BoundInputs& in, double delta, std::optional<PaulinParams> paulin) {
  in.validate();
  BoundReport r = thm2_expectation(in);
  const TailBound tail = thm2_tail(in, delta);
  r.delta = delta;
  r.tail_threshold_t = tail.threshold;
  r.tail_probability_raw = tail.prob_bound;
  r.tail_probability = std::clamp(tail.prob_bound, 0.0, 1.0);
  r.tail_vacuous = tail.prob_bound >= 1.0;
  r.comparison_soloveychik = soloveychik_expectation(in);
  if (paulin) r.comparison_paulin = paulin_expectation(in, paulin->l_bound, paulin->entry_sigma);
  r.metadata.emplace_back("norm_source", to_string(in.source));
  return r;
}

double thm1_tail_integral(const BoundInputs& in) {
  // E||W - EW|| = int_0^inf P(||W - EW|| >= t) dt with t = t(delta); below
  // delta0 the probability bound is >= 1 and is replaced by 1.
  const double n = static_cast<double>(in.n);
  const double delta0 = std::sqrt((2.0 * n * kLog3 + std::log(2.0)) / 2.0);
  const double scale = in.sigma_spectral / static_cast<double>(in.m);
  const double head = dev_threshold(in, delta0);

  // Above delta0: 2 exp(-2 d^2 + 2 n log 3) = exp(-2 (d - delta0)(d + delta0)).
  auto integrand = [&](double d) {
    return std::exp(-2.0 * (d - delta0) * (d + delta0)) * (32.0 * in.b_frobenius + 128.0 * in.b_spectral * d);
  };
  const double span = 10.0;
  const int steps = 20000;
  const double h = span / steps;
  double s = integrand(delta0) + integrand(delta0 + span);
  for (int k = 1; k < steps; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * integrand(delta0 + k * h);
  return head + scale * s * h / 3.0;
}

}  // namespace corrcov
