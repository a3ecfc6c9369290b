#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace corrcov {

// Row-major dense matrix of finite doubles.
class DenseMatrix {
 public:
  // Zero-filled rows x cols matrix; both counts must be positive.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major entries; rejects size mismatch and NaN/Inf.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }

  DenseMatrix transpose() const;
  // True when every entry is finite.
  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// scale * a * a^T, exactly symmetric.
DenseMatrix gram(const DenseMatrix& a, double scale);
// (a + a^T) / 2
DenseMatrix symmetrize(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// Dot product with four independent accumulators; summation order is fixed.
double dot(std::span<const double> x, std::span<const double> y) noexcept;

// Symmetric positive-definite matrix with its lower Cholesky factor.
//
// Construction mirrors the lower triangle into the upper one so the stored
// matrix is exactly symmetric, then factors it; a failed pivot throws
// NotPositiveDefinite. Immutable afterwards.
class SpdMatrix {
 public:
  // Accepts a square matrix symmetric to within 1e-12 relative to its largest entry.
  explicit SpdMatrix(DenseMatrix matrix);

  static SpdMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const DenseMatrix& matrix() const noexcept { return matrix_; }
  const DenseMatrix& chol() const noexcept { return chol_; }
  bool is_identity() const noexcept { return is_identity_; }

 private:
  DenseMatrix matrix_;
  DenseMatrix chol_;
  bool is_identity_ = false;
};

// Lower-triangular L with L * L^T = a. Throws NotPositiveDefinite with the
// zero-based index of the first non-positive pivot.
DenseMatrix cholesky(const DenseMatrix& a);
inline const DenseMatrix& cholesky(const SpdMatrix& a) { return a.chol(); }

inline constexpr double kSpectralTol = 1e-10;
inline constexpr std::size_t kSpectralMaxIter = 64;

// Largest absolute eigenvalue of a symmetric matrix. Power iteration on a*a
// with the power doubled at every step: a*a is repeatedly squared (Frobenius
// normalized) until successive squares differ by at most tol, so nearly tied
// leading |eigenvalues| cannot stall it. max_iter caps the squarings. The
// settled square is applied to the normalized all-ones vector (or, if that is
// orthogonal to the leading eigenspace, its largest column is used) and the
// norm of a times that unit vector is returned.
double spectral_norm(const DenseMatrix& a, double tol = kSpectralTol,
                     std::size_t max_iter = kSpectralMaxIter);

double frobenius_norm(const DenseMatrix& a) noexcept;
double trace(const DenseMatrix& a);

inline constexpr std::size_t kEigOracleMaxDim = 64;

// Test oracle: all eigenvalues of a symmetric matrix (dim <= 64) by cyclic
// Jacobi rotations, sorted descending.
std::vector<double> eig_oracle(const DenseMatrix& a);

// Smallest eigenvalue of the symmetric tridiagonal matrix with the given
// diagonal and off-diagonal, by Sturm-sequence bisection to machine precision.
double tridiagonal_min_eigenvalue(std::span<const double> diag, std::span<const double> off);

}  // namespace corrcov
