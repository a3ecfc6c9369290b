#pragma once

#include <cstddef>

#include "corrcov/linalg.hpp"
#include "corrcov/prng.hpp"
#include "corrcov/shape_models.hpp"

namespace corrcov {

// Independent samples x (columns) and their correlated mixture y = x * Lambda.
struct SampleBatch {
  std::size_t n;
  std::size_t m;
  DenseMatrix x;
  DenseMatrix y;
};

// n x m matrix whose columns are chol(sigma) * g, g ~ N(0, I_n). Deviates are
// drawn column by column, top to bottom.
DenseMatrix sample_x(Prng& rng, std::size_t n, std::size_t m, const SpdMatrix& sigma);

// Batch with y = x * Lambda(model); x must have model.m() columns.
SampleBatch correlate(DenseMatrix x, const ShapeModel& model);

}  // namespace corrcov
