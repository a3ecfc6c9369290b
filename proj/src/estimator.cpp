#include "corrcov/estimator.hpp"

#include <cmath>
#include <sstream>

#include "corrcov/error.hpp"

namespace corrcov {

namespace {

void require_match(const CovEstimate& est, const SpdMatrix& sigma) {
  if (est.n != sigma.dim()) {
    std::ostringstream os;
    os << "estimate is " << est.n << "x" << est.n << " but sigma is " << sigma.dim() << "x" << sigma.dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

CovEstimate sample_covariance(const SampleBatch& batch) {
  const double inv_m = 1.0 / static_cast<double>(batch.y.cols());
  return CovEstimate{batch.y.rows(), batch.y.cols(), gram(batch.y, inv_m)};
}

CovEstimate compound_wishart(const DenseMatrix& x, const DenseMatrix& b) {
  if (!b.is_square() || b.rows() != x.cols()) {
    std::ostringstream os;
    os << "compound_wishart: b is " << b.rows() << "x" << b.cols() << " but x has " << x.cols()
       << " columns";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  const std::size_t m = x.cols();
  const DenseMatrix xb = multiply(x, b);
  DenseMatrix w(x.rows(), x.rows());
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j) w(i, j) = inv_m * dot(xb.row(i), x.row(j));
  return CovEstimate{x.rows(), m, symmetrize(w)};
}

double spectral_error(const CovEstimate& est, const SpdMatrix& sigma) {
  require_match(est, sigma);
  return spectral_norm(est.sigma_hat - sigma.matrix());
}

double relative_frobenius_error(const CovEstimate& est, const SpdMatrix& sigma) {
  require_match(est, sigma);
  return frobenius_norm(est.sigma_hat - sigma.matrix()) / frobenius_norm(sigma.matrix());
}

ThresholdCheck relative_frobenius_within(const DenseMatrix& y, const SpdMatrix& sigma, double eta) {
  const std::size_t n = y.rows();
  if (n != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "relative_frobenius_within: dimension mismatch");
  const double inv_m = 1.0 / static_cast<double>(y.cols());
  const double sigma_f = frobenius_norm(sigma.matrix());
  const double budget = eta * eta * sigma_f * sigma_f;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto yi = y.row(i);
    const double d = inv_m * dot(yi, yi) - sigma.matrix()(i, i);
    sq += d * d;
  }
  for (std::size_t i = 1; i < n && sq <= budget; ++i) {
    const auto yi = y.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double d = inv_m * dot(yi, y.row(j)) - sigma.matrix()(i, j);
      sq += 2.0 * d * d;
    }
  }
  return {sq <= budget, std::sqrt(sq) / sigma_f};
}

}  // namespace corrcov
