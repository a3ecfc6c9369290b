#pragma once

// Independent oracles and random-input generators shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "corrcov/linalg.hpp"

namespace testing {

// Inputs come from std::mt19937_64, not the library PRNG, so generator and
// code under test never share a stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>()(eng_); }

  corrcov::DenseMatrix matrix(std::size_t r, std::size_t c, double scale = 1.0) {
    std::vector<double> v(r * c);
    for (auto& x : v) x = scale * normal();
    return corrcov::DenseMatrix(r, c, std::move(v));
  }
  corrcov::DenseMatrix symmetric(std::size_t n, double scale = 1.0) {
    corrcov::DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = scale * normal();
    return a;
  }
  // g g^T + n I, well conditioned.
  corrcov::DenseMatrix spd(std::size_t n) {
    const auto g = matrix(n, n);
    corrcov::DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
        a(i, j) = a(j, i) = s + (i == j ? static_cast<double>(n) : 0.0);
      }
    return a;
  }

 private:
  std::mt19937_64 eng_;
};

// Plain triple-loop product, no blocking or accumulator tricks.
inline corrcov::DenseMatrix naive_product(const corrcov::DenseMatrix& a, const corrcov::DenseMatrix& b) {
  corrcov::DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

inline corrcov::DenseMatrix naive_transpose(const corrcov::DenseMatrix& a) {
  corrcov::DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double max_abs(const corrcov::DenseMatrix& a, const corrcov::DenseMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Determinant of a 3x3 matrix by cofactor expansion.
inline double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Roots of det(a - lambda I) for a symmetric 3x3 matrix: sign changes on a fine
// grid over the Gershgorin interval, refined by bisection. Sorted descending.
inline std::vector<double> char_poly_roots3(const corrcov::DenseMatrix& a) {
  auto p = [&](double lam) {
    double m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = a(i, j) - (i == j ? lam : 0.0);
    return det3(m);
  };
  double r = 0.0;
  for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(a(i, 0)) + std::abs(a(i, 1)) + std::abs(a(i, 2)));
  std::vector<double> roots;
  const int steps = 30000;
  const double lo = -r - 1.0, hi = r + 1.0, h = (hi - lo) / steps;
  for (int k = 0; k < steps; ++k) {
    double x0 = lo + k * h, x1 = x0 + h;
    double f0 = p(x0), f1 = p(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
      continue;
    }
    if ((f0 < 0) == (f1 < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (x0 + x1);
      const double fm = p(mid);
      if ((fm < 0) == (f0 < 0)) {
        x0 = mid;
        f0 = fm;
      } else {
        x1 = mid;
      }
    }
    roots.push_back(0.5 * (x0 + x1));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(a <= chi^2_1 <= b) from the chi-square(1) CDF erf(sqrt(x/2)).
inline double chi2_1_prob(double a, double b) {
  auto cdf = [](double x) { return x <= 0.0 ? 0.0 : std::erf(std::sqrt(x / 2.0)); };
  return cdf(b) - cdf(a);
}

// Two-sided Kolmogorov-Smirnov statistic of xs against N(0,1).
inline double ks_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

struct Moments {
  double mean;
  double var;
};

inline Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace testing
