#pragma once

#include <cstddef>

#include "corrcov/linalg.hpp"
#include "corrcov/sampling.hpp"

namespace corrcov {

struct CovEstimate {
  std::size_t n;
  std::size_t m;
  DenseMatrix sigma_hat;  // exactly symmetric
};

// (1/m) y y^T of the correlated batch.
CovEstimate sample_covariance(const SampleBatch& batch);

// (1/m) x b x^T for any symmetric b with b.rows() == x.cols(), symmetrized.
CovEstimate compound_wishart(const DenseMatrix& x, const DenseMatrix& b);

// ||sigma_hat - sigma||
double spectral_error(const CovEstimate& est, const SpdMatrix& sigma);

// ||sigma_hat - sigma||_F / ||sigma||_F
double relative_frobenius_error(const CovEstimate& est, const SpdMatrix& sigma);

// Exact test of relative_frobenius_error(sample covariance of y) <= eta.
// Builds (1/m) y y^T row by row and stops as soon as the accumulated squared
// error already exceeds the budget, so failing probes are cheaper than a full
// product. Returns the error when it passes and a lower bound on it otherwise.
struct ThresholdCheck {
  bool passed;
  double error;
};
ThresholdCheck relative_frobenius_within(const DenseMatrix& y, const SpdMatrix& sigma, double eta);

}  // namespace corrcov
