#include <cmath>
#include <limits>

#include "corrcov/error.hpp"
#include "corrcov/linalg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corrcov;
using testing::Gen;

TEST_SUITE("linalg") {

TEST_CASE("dense matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(DenseMatrix(0, 3), Error);
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
  try {
    DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()});
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
  const auto a = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a(1, 2) == 6.0);
  CHECK(a.transpose() == testing::naive_transpose(a));
}

TEST_CASE("products match the naive triple loop") {
  Gen g(11);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t r = g.index(1, 9), k = g.index(1, 9), c = g.index(1, 9);
    const auto a = g.matrix(r, k), b = g.matrix(k, c);
    CHECK(testing::max_abs(multiply(a, b), testing::naive_product(a, b)) <= 1e-12);
    const auto gm = gram(a, 0.5);
    CHECK(gm == gm.transpose());
    CHECK(testing::max_abs(gm, 0.5 * testing::naive_product(a, testing::naive_transpose(a))) <= 1e-12);
  }
  CHECK_THROWS_AS(multiply(DenseMatrix(2, 3), DenseMatrix(2, 3)), Error);
}

TEST_CASE("cholesky examples") {
  CHECK(cholesky(DenseMatrix::identity(3)) == DenseMatrix::identity(3));

  const auto l = cholesky(DenseMatrix::from_rows({{4, 2}, {2, 3}}));
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  const auto back = testing::naive_product(l, testing::naive_transpose(l));
  CHECK(testing::max_abs(back, DenseMatrix::from_rows({{4, 2}, {2, 3}})) <= 1e-14);

  try {
    cholesky(DenseMatrix::from_rows({{1, 1}, {1, 1}}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 1);
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("spd matrix rejects asymmetric input and reconstructs from its factor") {
  CHECK_THROWS_AS(SpdMatrix(DenseMatrix::from_rows({{2, 1}, {0, 2}})), Error);
  CHECK_THROWS_AS(SpdMatrix(DenseMatrix(2, 3)), Error);
  CHECK(SpdMatrix::identity(4).is_identity());

  Gen g(5);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = g.index(1, 64);
    const SpdMatrix s(g.spd(n));
    CHECK(s.matrix() == s.matrix().transpose());
    const auto& l = s.chol();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) CHECK(l(i, j) == 0.0);
    const double scale = std::max(1.0, testing::max_abs(s.matrix(), DenseMatrix(n, n)));
    CHECK(testing::max_abs(testing::naive_product(l, testing::naive_transpose(l)), s.matrix()) <= 1e-12 * scale);
  }
}

TEST_CASE("spectral norm examples") {
  CHECK(spectral_norm(DenseMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));
  const double d[] = {1.0, -3.0, 2.0};
  CHECK(spectral_norm(DenseMatrix::diagonal(d)) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(spectral_norm(DenseMatrix::from_rows({{1, 0.5}, {0.5, 1}})) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(spectral_norm(DenseMatrix(3, 3)) == 0.0);
  // All-ones start vector is orthogonal to the only eigenvector with nonzero eigenvalue.
  CHECK(spectral_norm(DenseMatrix::from_rows({{1, -1}, {-1, 1}})) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(spectral_norm(DenseMatrix(2, 3)), Error);
}

TEST_CASE("frobenius norm and trace examples") {
  CHECK(frobenius_norm(DenseMatrix::identity(9)) == doctest::Approx(3.0));
  CHECK(frobenius_norm(DenseMatrix(4, 4, std::vector<double>(16, 1.0))) == doctest::Approx(4.0));
  CHECK(frobenius_norm(DenseMatrix::from_rows({{1, 0.5}, {0.5, 1}})) == doctest::Approx(std::sqrt(2.5)));
  CHECK(trace(DenseMatrix::identity(7)) == 7.0);
  const double d[] = {1.0, 2.0, 3.0};
  CHECK(trace(DenseMatrix::diagonal(d)) == 6.0);
  CHECK_THROWS_AS(trace(DenseMatrix(2, 3)), Error);
}

TEST_CASE("eig oracle examples") {
  const double d[] = {3.0, 1.0, 2.0};
  const auto e = eig_oracle(DenseMatrix::diagonal(d));
  REQUIRE(e.size() == 3);
  CHECK(e[0] == doctest::Approx(3.0));
  CHECK(e[1] == doctest::Approx(2.0));
  CHECK(e[2] == doctest::Approx(1.0));

  const auto swap = eig_oracle(DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(swap[0] == doctest::Approx(1.0));
  CHECK(swap[1] == doctest::Approx(-1.0));

  // T(1/4), m = 3, against the characteristic polynomial.
  const auto t = DenseMatrix::from_rows({{1, 0.25, 0.0625}, {0.25, 1, 0.25}, {0.0625, 0.25, 1}});
  const auto roots = testing::char_poly_roots3(t);
  const auto ev = eig_oracle(t);
  REQUIRE(roots.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(ev[i] == doctest::Approx(roots[i]).epsilon(1e-10));

  CHECK_THROWS_AS(eig_oracle(DenseMatrix::identity(kEigOracleMaxDim + 1)), Error);
}

TEST_CASE("norm properties on random symmetric matrices") {
  Gen g(2024);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = g.index(1, 40);
    const auto a = g.symmetric(n, g.uniform(0.1, 10.0));
    const auto ev = eig_oracle(a);
    double max_abs_ev = 0.0, sum = 0.0, sum_sq = 0.0;
    for (double v : ev) {
      max_abs_ev = std::max(max_abs_ev, std::abs(v));
      sum += v;
      sum_sq += v * v;
    }
    const double s = spectral_norm(a);
    CHECK(std::abs(s - max_abs_ev) <= 1e-8 * std::max(1.0, s));
    const double f = frobenius_norm(a);
    CHECK(testing::rel_diff(f * f, sum_sq) <= 1e-10);
    CHECK(std::abs(trace(a) - sum) <= 1e-10 * std::max(1.0, std::abs(sum)) + 1e-10 * f);
    CHECK(s <= f * (1.0 + 1e-12));
    CHECK(f <= std::sqrt(static_cast<double>(n)) * s * (1.0 + 1e-12));
  }
}

TEST_CASE("tridiagonal minimum eigenvalue agrees with the Jacobi oracle") {
  Gen g(77);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = g.index(1, 30);
    std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = diag[i] = g.normal();
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = off[i] = g.normal();
    const double want = eig_oracle(a).back();
    CHECK(tridiagonal_min_eigenvalue(diag, off) == doctest::Approx(want).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("spectral norm with nearly tied leading eigenvalues of opposite sign") {
  // diag(1, -(1 - 1e-7), 0.3) rotated: plain power iteration contracts by ~1 - 1e-7 per step.
  testing::Gen g(77);
  for (double eps : {1e-4, 1e-7, 1e-12, 0.0}) {
    const std::size_t n = 6;
    std::vector<double> d = {1.0, -(1.0 - eps), 0.3, -0.2, 0.1, 0.05};
    DenseMatrix q = g.matrix(n, n);
    // Gram-Schmidt to an orthogonal basis.
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, j) * q(i, k);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
      double nn = 0.0;
      for (std::size_t i = 0; i < n; ++i) nn += q(i, j) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) /= std::sqrt(nn);
    }
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += q(i, k) * d[k] * q(j, k);
        a(i, j) = s;
      }
    a = 0.5 * (a + a.transpose());
    CAPTURE(eps);
    CHECK(std::abs(spectral_norm(a) - 1.0) <= 1e-8);
  }
}

}  // TEST_SUITE
