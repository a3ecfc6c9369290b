#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corrcov {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  NotSymmetric,
  NonFinite,
  ConvergenceFailure,
  OracleSizeExceeded,
  InvalidModel,
  NoAnalyticForm,
  InvalidInputs,
  CapExceeded,
  InvalidConfig,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot);
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(std::size_t iterations, double last_gap);
  double last_gap() const noexcept { return last_gap_; }

 private:
  double last_gap_;
};

// Raised when no probe up to the cap meets the relative-error criterion.
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t cap, double last_error);
  std::size_t cap() const noexcept { return cap_; }
  double last_error() const noexcept { return last_error_; }

 private:
  std::size_t cap_;
  double last_error_;
};

}  // namespace corrcov
