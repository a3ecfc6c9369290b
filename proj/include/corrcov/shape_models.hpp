#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corrcov/linalg.hpp"

namespace corrcov {

enum class ModelKind { Identity, Toeplitz, AllOnes, RandomDiagonal };

const char* to_string(ModelKind kind) noexcept;

// trace, Frobenius and spectral norm of the shape matrix B.
struct ShapeNorms {
  double trace = 0.0;
  double frobenius = 0.0;
  double spectral = 0.0;
  // False when the Frobenius or spectral entry is an upper bound rather than the exact value.
  bool exact = true;
};

class ShapeModel;

// A model family without a sample count, e.g. "toeplitz:0.5".
struct ModelDescriptor {
  ModelKind kind = ModelKind::Identity;
  double theta = 0.0;
  double mu = 0.0;
  double sigma = 0.0;

  // Parses `identity | toeplitz:<theta> | all_ones | random_diag:<mu>,<sigma>`.
  // Malformed text throws ParseError; out-of-range parameters throw InvalidModel.
  static ModelDescriptor parse(std::string_view text);

  // Canonical descriptor text; parse(to_string()) reproduces the descriptor.
  std::string to_string() const;
  // to_string() with ':' and ',' replaced by '_', for file names.
  std::string file_id() const;

  // The seed is only consumed by RandomDiagonal.
  ShapeModel instantiate(std::size_t m, std::uint64_t seed = 0) const;

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

// Correlation model for m samples: a fixed m x m mixing matrix Lambda with
// shape matrix B = Lambda Lambda^T. Immutable after construction.
class ShapeModel {
 public:
  static ShapeModel identity(std::size_t m);
  // B[i][j] = theta^|i-j|, 0 < theta < 1; Lambda is the lower Cholesky factor of B.
  static ShapeModel toeplitz(double theta, std::size_t m);
  // B is the all-ones matrix; Lambda = ones / sqrt(m), so every sample is the
  // normalized sum of the independent ones.
  static ShapeModel all_ones(std::size_t m);
  // Lambda = diag(rho), rho_i = mu + sigma * z_i with z drawn from Prng(seed).
  static ShapeModel random_diagonal(double mu, double sigma, std::uint64_t seed, std::size_t m);

  ModelKind kind() const noexcept { return descriptor_.kind; }
  std::size_t m() const noexcept { return m_; }
  const ModelDescriptor& descriptor() const noexcept { return descriptor_; }
  std::uint64_t seed() const noexcept { return seed_; }
  // Diagonal of Lambda for RandomDiagonal; empty otherwise.
  std::span<const double> rho() const noexcept { return rho_; }

  DenseMatrix materialize_lambda() const;
  DenseMatrix materialize_b() const;

  // Closed forms: Identity (m, sqrt m, 1), AllOnes (m, m, m), Toeplitz with
  // the exact finite-m Frobenius identity and the Gershgorin bound
  // (1+theta)/(1-theta) on the spectral norm. RandomDiagonal throws NoAnalyticForm.
  ShapeNorms analytic_norms() const;

  // Norms of the materialized B computed from its entries. Toeplitz uses the
  // tridiagonal inverse of B for the spectral norm, so no m x m matrix is formed.
  ShapeNorms numeric_norms() const;

  // x * Lambda in O(rows * m) using the model structure; x must have m columns.
  DenseMatrix apply_lambda(const DenseMatrix& x) const;

 private:
  ShapeModel(ModelDescriptor d, std::size_t m) : descriptor_(d), m_(m) {}

  ModelDescriptor descriptor_;
  std::size_t m_;
  std::uint64_t seed_ = 0;
  std::vector<double> rho_;
};

// Exact ||T(theta)||_F for an m x m Toeplitz model (before the m(1+theta^2)/(1-theta^2) relaxation).
double toeplitz_frobenius_exact(double theta, std::size_t m);
// Gershgorin bound (1+theta)/(1-theta) on ||T(theta)||.
double toeplitz_spectral_upper(double theta);

}  // namespace corrcov
