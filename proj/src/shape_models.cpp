#include "corrcov/shape_models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "corrcov/error.hpp"
#include "corrcov/prng.hpp"

namespace corrcov {

namespace {

void require_m(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::InvalidModel, "model sample count m must be at least 1");
}

void validate(const ModelDescriptor& d) {
  switch (d.kind) {
    case ModelKind::Toeplitz:
      if (!(d.theta > 0.0 && d.theta < 1.0)) {
        std::ostringstream os;
        os << "toeplitz theta must lie strictly inside (0, 1), got " << d.theta;
        throw Error(ErrorCode::InvalidModel, os.str());
      }
      break;
    case ModelKind::RandomDiagonal:
      if (!std::isfinite(d.mu)) throw Error(ErrorCode::InvalidModel, "random_diag mu must be finite");
      if (!(d.sigma >= 0.0) || !std::isfinite(d.sigma)) {
        throw Error(ErrorCode::InvalidModel, "random_diag sigma must be finite and >= 0");
      }
      break;
    default:
      break;
  }
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw Error(ErrorCode::ParseError,
                "cannot parse number '" + std::string(text) + "' in model '" + std::string(whole) + "'");
  }
  return value;
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Identity: return "identity";
    case ModelKind::Toeplitz: return "toeplitz";
    case ModelKind::AllOnes: return "all_ones";
    case ModelKind::RandomDiagonal: return "random_diag";
  }
  return "unknown";
}

ModelDescriptor ModelDescriptor::parse(std::string_view text) {
  ModelDescriptor d;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_args = colon != std::string_view::npos;

  if (name == "identity" && !has_args) {
    d.kind = ModelKind::Identity;
  } else if (name == "all_ones" && !has_args) {
    d.kind = ModelKind::AllOnes;
  } else if (name == "toeplitz" && has_args) {
    d.kind = ModelKind::Toeplitz;
    d.theta = parse_number(args, text);
  } else if (name == "random_diag" && has_args) {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "random_diag expects '<mu>,<sigma>', got '" + std::string(text) + "'");
    }
    d.kind = ModelKind::RandomDiagonal;
    d.mu = parse_number(args.substr(0, comma), text);
    d.sigma = parse_number(args.substr(comma + 1), text);
  } else {
    throw Error(ErrorCode::ParseError,
                "unknown model '" + std::string(text) +
                    "' (expected identity, toeplitz:<theta>, all_ones or random_diag:<mu>,<sigma>)");
  }
  validate(d);
  return d;
}

std::string ModelDescriptor::to_string() const {
  switch (kind) {
    case ModelKind::Toeplitz: return "toeplitz:" + format_number(theta);
    case ModelKind::RandomDiagonal: return "random_diag:" + format_number(mu) + "," + format_number(sigma);
    default: return corrcov::to_string(kind);
  }
}

std::string ModelDescriptor::file_id() const {
  std::string id = to_string();
  std::replace(id.begin(), id.end(), ':', '_');
  std::replace(id.begin(), id.end(), ',', '_');
  return id;
}

ShapeModel ModelDescriptor::instantiate(std::size_t m, std::uint64_t seed) const {
  switch (kind) {
    case ModelKind::Identity: return ShapeModel::identity(m);
    case ModelKind::Toeplitz: return ShapeModel::toeplitz(theta, m);
    case ModelKind::AllOnes: return ShapeModel::all_ones(m);
    case ModelKind::RandomDiagonal: return ShapeModel::random_diagonal(mu, sigma, seed, m);
  }
  throw Error(ErrorCode::InvalidModel, "unknown model kind");
}

ShapeModel ShapeModel::identity(std::size_t m) {
  require_m(m);
  return ShapeModel({ModelKind::Identity}, m);
}

ShapeModel ShapeModel::toeplitz(double theta, std::size_t m) {
  require_m(m);
  ModelDescriptor d{ModelKind::Toeplitz, theta};
  validate(d);
  return ShapeModel(d, m);
}

ShapeModel ShapeModel::all_ones(std::size_t m) {
  require_m(m);
  return ShapeModel({ModelKind::AllOnes}, m);
}

ShapeModel ShapeModel::random_diagonal(double mu, double sigma, std::uint64_t seed, std::size_t m) {
  require_m(m);
  ModelDescriptor d{ModelKind::RandomDiagonal, 0.0, mu, sigma};
  validate(d);
  ShapeModel model(d, m);
  model.seed_ = seed;
  model.rho_.resize(m);
  Prng rng(seed);
  for (double& r : model.rho_) r = mu + sigma * rng.standard_normal();
  return model;
}

DenseMatrix ShapeModel::materialize_b() const {
  const std::size_t m = m_;
  DenseMatrix b(m, m);
  switch (kind()) {
    case ModelKind::Identity:
      for (std::size_t i = 0; i < m; ++i) b(i, i) = 1.0;
      break;
    case ModelKind::Toeplitz: {
      std::vector<double> powers(m, 1.0);
      for (std::size_t k = 1; k < m; ++k) powers[k] = powers[k - 1] * descriptor_.theta;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b(i, j) = powers[i > j ? i - j : j - i];
      break;
    }
    case ModelKind::AllOnes:
      std::fill(b.entries().begin(), b.entries().end(), 1.0);
      break;
    case ModelKind::RandomDiagonal:
      for (std::size_t i = 0; i < m; ++i) b(i, i) = rho_[i] * rho_[i];
      break;
  }
  return b;
}

DenseMatrix ShapeModel::materialize_lambda() const {
  switch (kind()) {
    case ModelKind::Identity: return DenseMatrix::identity(m_);
    case ModelKind::Toeplitz: return cholesky(materialize_b());
    case ModelKind::AllOnes: {
      DenseMatrix l(m_, m_);
      const double v = 1.0 / std::sqrt(static_cast<double>(m_));
      std::fill(l.entries().begin(), l.entries().end(), v);
      return l;
    }
    case ModelKind::RandomDiagonal: return DenseMatrix::diagonal(rho_);
  }
  throw Error(ErrorCode::InvalidModel, "unknown model kind");
}

double toeplitz_frobenius_exact(double theta, std::size_t m) {
  const double md = static_cast<double>(m);
  const double t2 = theta * theta;
  const double one_minus = 1.0 - t2;
  const double sq = md * (1.0 + t2) / one_minus +
                    2.0 * t2 * (std::pow(t2, md) - 1.0) / (one_minus * one_minus);
  return std::sqrt(sq);
}

double toeplitz_spectral_upper(double theta) { return (1.0 + theta) / (1.0 - theta); }

ShapeNorms ShapeModel::analytic_norms() const {
  const double md = static_cast<double>(m_);
  switch (kind()) {
    case ModelKind::Identity: return {md, std::sqrt(md), 1.0, true};
    case ModelKind::AllOnes: return {md, md, md, true};
    case ModelKind::Toeplitz:
      return {md, toeplitz_frobenius_exact(descriptor_.theta, m_),
              toeplitz_spectral_upper(descriptor_.theta), false};
    case ModelKind::RandomDiagonal:
      break;
  }
  throw Error(ErrorCode::NoAnalyticForm, "random_diag has no closed-form norms; use numeric norms");
}

ShapeNorms ShapeModel::numeric_norms() const {
  const std::size_t m = m_;
  const double md = static_cast<double>(m);
  ShapeNorms out;
  switch (kind()) {
    case ModelKind::Identity:
      out = {md, std::sqrt(md), 1.0, true};
      break;
    case ModelKind::AllOnes:
      out = {md, std::sqrt(md * md), md, true};
      break;
    case ModelKind::Toeplitz: {
      const double theta = descriptor_.theta;
      // Squared entries summed diagonal by diagonal: m + 2 sum_k (m-k) theta^{2k}.
      double sq = md;
      double p = 1.0;
      for (std::size_t k = 1; k < m; ++k) {
        p *= theta * theta;
        sq += 2.0 * static_cast<double>(m - k) * p;
      }
      double spectral = 1.0;
      if (m > 1) {
        // B^{-1} is tridiagonal: (1/(1-theta^2)) * tridiag(-theta; 1, 1+theta^2, ..., 1+theta^2, 1; -theta).
        const double s = 1.0 / (1.0 - theta * theta);
        std::vector<double> diag(m, (1.0 + theta * theta) * s);
        diag.front() = s;
        diag.back() = s;
        std::vector<double> off(m - 1, -theta * s);
        spectral = 1.0 / tridiagonal_min_eigenvalue(diag, off);
      }
      out = {md, std::sqrt(sq), spectral, true};
      break;
    }
    case ModelKind::RandomDiagonal: {
      double tr = 0.0, sq = 0.0, mx = 0.0;
      for (double r : rho_) {
        const double b = r * r;
        tr += b;
        sq += b * b;
        mx = std::max(mx, b);
      }
      out = {tr, std::sqrt(sq), mx, true};
      break;
    }
  }
  return out;
}

DenseMatrix ShapeModel::apply_lambda(const DenseMatrix& x) const {
  const std::size_t m = m_;
  if (x.cols() != m) {
    std::ostringstream os;
    os << "x has " << x.cols() << " columns but the model has m = " << m;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  DenseMatrix y(x.rows(), m);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    auto yr = y.row(r);
    switch (kind()) {
      case ModelKind::Identity:
        std::copy(xr.begin(), xr.end(), yr.begin());
        break;
      case ModelKind::Toeplitz: {
        // Lower Cholesky factor of T(theta): L[i][j] = theta^{i-j} c_j with
        // c_0 = 1 and c_j = sqrt(1 - theta^2) otherwise, so
        // (xL)_j = c_j * s_j with s_j = x_j + theta * s_{j+1}.
        const double theta = descriptor_.theta;
        const double c = std::sqrt(1.0 - theta * theta);
        double s = 0.0;
        for (std::size_t j = m; j-- > 0;) {
          s = xr[j] + theta * s;
          yr[j] = (j == 0 ? 1.0 : c) * s;
        }
        break;
      }
      case ModelKind::AllOnes: {
        double sum = 0.0;
        for (double v : xr) sum += v;
        std::fill(yr.begin(), yr.end(), sum / std::sqrt(static_cast<double>(m)));
        break;
      }
      case ModelKind::RandomDiagonal:
        for (std::size_t j = 0; j < m; ++j) yr[j] = xr[j] * rho_[j];
        break;
    }
  }
  return y;
}

}  // namespace corrcov
