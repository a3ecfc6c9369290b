#include "corrcov/error.hpp"

#include <sstream>

namespace corrcov {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::OracleSizeExceeded: return "OracleSizeExceeded";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NoAnalyticForm: return "NoAnalyticForm";
    case ErrorCode::InvalidInputs: return "InvalidInputs";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string pivot_message(std::size_t pivot) {
  std::ostringstream os;
  os << "matrix is not positive definite: non-positive pivot at index " << pivot;
  return os.str();
}

std::string convergence_message(std::size_t iterations, double gap) {
  std::ostringstream os;
  os << "power iteration did not converge after " << iterations
     << " iterations (last relative gap " << gap << ")";
  return os.str();
}

std::string cap_message(std::size_t cap, double last_error) {
  std::ostringstream os;
  os << "no sample size up to " << cap
     << " met the error threshold (last error " << last_error << ")";
  return os.str();
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot)
    : Error(ErrorCode::NotPositiveDefinite, pivot_message(pivot)), pivot_(pivot) {}

ConvergenceFailure::ConvergenceFailure(std::size_t iterations, double last_gap)
    : Error(ErrorCode::ConvergenceFailure, convergence_message(iterations, last_gap)),
      last_gap_(last_gap) {}

CapExceeded::CapExceeded(std::size_t cap, double last_error)
    : Error(ErrorCode::CapExceeded, cap_message(cap, last_error)),
      cap_(cap),
      last_error_(last_error) {}

}  // namespace corrcov
