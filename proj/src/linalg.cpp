#include "corrcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "corrcov/error.hpp"

namespace corrcov {

namespace {

void require_positive(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix dimensions must be positive");
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_square(const DenseMatrix& a, const char* op) {
  if (!a.is_square()) {
    std::ostringstream os;
    os << op << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void matvec(const DenseMatrix& a, std::span<const double> v, std::span<double> out) noexcept {
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), v);
}

double norm2(std::span<const double> v) noexcept { return std::sqrt(dot(v, v)); }

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  require_positive(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_positive(rows, cols);
  if (data_.size() != rows * cols) {
    std::ostringstream os;
    os << "expected " << rows * cols << " entries for a " << rows << "x" << cols
       << " matrix, got " << data_.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!all_finite()) throw Error(ErrorCode::NonFinite, "matrix entries must be finite");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  if (!out.all_finite()) throw Error(ErrorCode::NonFinite, "matrix entries must be finite");
  return out;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "add");
  DenseMatrix out = a;
  auto o = out.entries();
  auto bv = b.entries();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += bv[k];
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "subtract");
  DenseMatrix out = a;
  auto o = out.entries();
  auto bv = b.entries();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bv[k];
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& x : out.entries()) x *= s;
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "multiply: inner dimensions " << a.cols() << " and " << b.rows() << " differ";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  const std::size_t n = x.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += x[k] * y[k];
    s1 += x[k + 1] * y[k + 1];
    s2 += x[k + 2] * y[k + 2];
    s3 += x[k + 3] * y[k + 3];
  }
  for (; k < n; ++k) s0 += x[k] * y[k];
  return (s0 + s1) + (s2 + s3);
}

DenseMatrix gram(const DenseMatrix& a, double scale) {
  const std::size_t n = a.rows();
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = scale * dot(a.row(i), a.row(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
  require_square(a, "symmetrize");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto av = a.entries();
  auto bv = b.entries();
  for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
  return m;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  require_square(a, "cholesky");
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto lj = l.row(j).first(j);
    const double pivot = a(j, j) - dot(lj, lj);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j);
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - dot(l.row(i).first(j), lj)) / d;
    }
  }
  return l;
}

namespace {

DenseMatrix mirrored_lower(DenseMatrix m) {
  require_square(m, "SpdMatrix");
  double scale = 0.0;
  for (double x : m.entries()) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << ", " << j << ")";
        throw Error(ErrorCode::NotSymmetric, os.str());
      }
      m(j, i) = m(i, j);
    }
  }
  return m;
}

}  // namespace

SpdMatrix::SpdMatrix(DenseMatrix matrix)
    : matrix_(mirrored_lower(std::move(matrix))), chol_(cholesky(matrix_)) {
  is_identity_ = matrix_ == DenseMatrix::identity(matrix_.rows());
}

SpdMatrix SpdMatrix::identity(std::size_t n) { return SpdMatrix(DenseMatrix::identity(n)); }

double spectral_norm(const DenseMatrix& a, double tol, std::size_t max_iter) {
  require_square(a, "spectral_norm");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInputs, "spectral_norm: tol must be positive");
  const double fro = frobenius_norm(a);
  if (fro == 0.0) return 0.0;
  if (!std::isfinite(fro)) throw Error(ErrorCode::NonFinite, "spectral_norm: non-finite entries");

  // p_k = (a a)^(2^k) / ||.||_F. In the eigenbasis its diagonal is x_i / ||x||
  // with x_i = (lambda_i / lambda_1)^(2^(k+1)); p_k and p_(k+1) can only agree
  // once every x_i is near 0 or 1, i.e. p_k has settled on the leading
  // eigenspace of a a, however close the next |eigenvalue| is.
  const std::size_t n = a.rows();
  const DenseMatrix as = (1.0 / fro) * a;
  DenseMatrix p = multiply(as, as);
  p = (1.0 / frobenius_norm(p)) * p;
  double change = 1.0;
  for (std::size_t k = 0; k < max_iter; ++k) {
    DenseMatrix q = multiply(p, p);
    q = (1.0 / frobenius_norm(q)) * q;
    change = frobenius_norm(q - p);
    p = std::move(q);
    if (change <= tol) break;
  }
  if (change > tol) throw ConvergenceFailure(max_iter, change);

  // Apply p to the normalized all-ones vector; if that lands (nearly)
  // orthogonal to the leading eigenspace, use the largest column of p, which
  // carries at least 1/sqrt(n) of it.
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n);
  matvec(p, v, w);
  double nw = norm2(w);
  if (nw <= 0.5 / std::sqrt(static_cast<double>(n))) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += p(i, j) * p(i, j);
      if (c > best_norm) best_norm = c, best = j;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] = p(i, best);
    nw = norm2(w);
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  matvec(a, v, w);
  return norm2(w);
}

double frobenius_norm(const DenseMatrix& a) noexcept {
  const auto e = a.entries();
  return std::sqrt(dot(e, e));
}

double trace(const DenseMatrix& a) {
  require_square(a, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

std::vector<double> eig_oracle(const DenseMatrix& a) {
  require_square(a, "eig_oracle");
  const std::size_t n = a.rows();
  if (n > kEigOracleMaxDim) {
    std::ostringstream os;
    os << "eig_oracle is limited to dimension " << kEigOracleMaxDim << ", got " << n;
    throw Error(ErrorCode::OracleSizeExceeded, os.str());
  }
  DenseMatrix m = symmetrize(a);
  const double target = 1e-12 * std::max(1.0, frobenius_norm(m));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  if (off_norm() > target) throw ConvergenceFailure(100, off_norm());

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double tridiagonal_min_eigenvalue(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n) {
    throw Error(ErrorCode::DimensionMismatch, "tridiagonal: off-diagonal must have n-1 entries");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }

  // Number of eigenvalues strictly below x (Sturm count via LDL^T pivots).
  auto count_below = [&](double x) {
    std::size_t count = 0;
    double q = diag[0] - x;
    for (std::size_t i = 0;; ++i) {
      if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
      if (q < 0.0) ++count;
      if (i + 1 == n) break;
      q = diag[i + 1] - x - off[i] * off[i] / q;
    }
    return count;
  };

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace corrcov
