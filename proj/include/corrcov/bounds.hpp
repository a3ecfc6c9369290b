#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "corrcov/linalg.hpp"
#include "corrcov/shape_models.hpp"

namespace corrcov {

enum class NormSource { NumericNorms, AnalyticNorms };

const char* to_string(NormSource source) noexcept;

// Norm inputs shared by every bound: ||B||_F, ||B||, tr(B) and ||Sigma||.
struct BoundInputs {
  std::size_t n = 1;
  std::size_t m = 1;
  double b_frobenius = 0.0;
  double b_spectral = 0.0;
  double b_trace = 0.0;
  double sigma_spectral = 0.0;
  NormSource source = NormSource::NumericNorms;

  // Throws InvalidInputs on n or m of zero, negative or non-finite norms, or
  // (for numeric norms) ||B|| <= ||B||_F <= sqrt(m) ||B|| violated beyond
  // rounding. Analytic Toeplitz inputs carry a spectral upper bound that can
  // exceed ||B||_F at small m, so that ordering is not checked for them.
  void validate() const;
};

struct TailBound {
  double threshold;   // deviation level t for the given delta
  double prob_bound;  // failure probability bound, unclamped (may exceed 1)
};

struct BoundReport {
  double expectation_bound = 0.0;
  double delta = 0.0;
  double tail_threshold_t = 0.0;
  double tail_probability = 0.0;      // clamped to [0, 1]
  double tail_probability_raw = 0.0;  // as given by the formula
  bool tail_vacuous = false;          // raw probability bound >= 1
  double mean_shift_term = 0.0;
  double concentration_term = 0.0;
  double comparison_soloveychik = 0.0;
  std::optional<double> comparison_paulin;
  BoundInputs inputs;
  std::vector<std::pair<std::string, std::string>> metadata;
};

// Concentration of W = X B X^T / m around its mean for a given delta >= 0:
// threshold (32 ||B||_F delta + 64 ||B|| delta^2) / m * ||Sigma||,
// probability bound 2 exp(-2 delta^2 + 2 n log 3).
TailBound thm1_tail(const BoundInputs& in, double delta);

// (72 ||B||_F sqrt(n) + 282 ||B|| n) / m * ||Sigma||
double thm1_expectation(const BoundInputs& in);

// |tr(B)/m - 1| * ||Sigma||, the bias of the correlated estimator.
double mean_shift_term(const BoundInputs& in);

// Expectation bound on ||Sigma_hat - Sigma||: mean shift plus thm1_expectation.
// Tail fields are left at delta = 0 and comparisons are not evaluated.
BoundReport thm2_expectation(const BoundInputs& in);

// Tail bound on ||Sigma_hat - Sigma||: mean shift plus the thm1 threshold.
TailBound thm2_tail(const BoundInputs& in, double delta);

// 24 ceil(log 2n)^2 sqrt(n) (4 ||B|| + sqrt(pi) ||B||_F / ||B||) / m * ||Sigma||.
// Requires ||B|| > 0.
double soloveychik_expectation(const BoundInputs& in);

// (2 sqrt(v log n) + 32 sqrt(3) L n log n ||B||) / m with
// v = 44 (n s^2 + L^2) ||B||_F^2, for entries bounded by L with standard
// deviation s. Requires n >= 2, L > 0, s > 0.
double paulin_expectation(const BoundInputs& in, double l_bound, double entry_sigma);

// Smallest delta with 2 exp(-2 delta^2 + 2 n log 3) <= p.
double delta_for_probability(double p, std::size_t n);

// Norm inputs for a model and covariance. Analytic uses the closed forms
// (Toeplitz spectral norm is the Gershgorin upper bound); numeric uses the
// entries of B. ||Sigma|| is always numeric.
BoundInputs inputs_from_model(const ShapeModel& model, const SpdMatrix& sigma, bool use_analytic);

struct PaulinParams {
  double l_bound;
  double entry_sigma;
};

// Everything at once: expectation bound, tail at delta, comparison bounds.
BoundReport evaluate_bounds(const BoundInputs& in, double delta,
                            std::optional<PaulinParams> paulin = std::nullopt);

// Numerical integral of min(1, thm1 tail probability) over the thm1 threshold
// scale, i.e. the expectation implied by the tail bound alone.
double thm1_tail_integral(const BoundInputs& in);

}  // namespace corrcov
