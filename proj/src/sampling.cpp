#include "corrcov/sampling.hpp"

#include <sstream>

#include "corrcov/error.hpp"

namespace corrcov {

DenseMatrix sample_x(Prng& rng, std::size_t n, std::size_t m, const SpdMatrix& sigma) {
  if (n == 0 || m == 0) throw Error(ErrorCode::InvalidInputs, "sample_x: n and m must be at least 1");
  if (sigma.dim() != n) {
    std::ostringstream os;
    os << "sample_x: sigma is " << sigma.dim() << "x" << sigma.dim() << " but n = " << n;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  DenseMatrix g(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) g(i, j) = rng.standard_normal();
  if (sigma.is_identity()) return g;
  return multiply(sigma.chol(), g);
}

SampleBatch correlate(DenseMatrix x, const ShapeModel& model) {
  DenseMatrix y = model.apply_lambda(x);
  const std::size_t n = x.rows();
  return SampleBatch{n, model.m(), std::move(x), std::move(y)};
}

}  // namespace corrcov
