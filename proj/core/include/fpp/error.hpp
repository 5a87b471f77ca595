#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpp {

// Every failure the library reports carries one of these kinds. The CLI maps
// each kind to a stable exit code, so the numeric values must not change.
enum class ErrorKind : int {
  InvalidArgument = 10,
  DimensionMismatch = 11,
  EmptyInput = 12,
  NotSymmetric = 13,
  NoConvergence = 14,
  RankDeficient = 15,
  Overflow = 16,
  Io = 20,
  BadMagic = 21,
  UnsupportedVersion = 22,
  Truncated = 23,
  TrailingData = 24,
  NonFinite = 25,
  Parse = 26,
  InvariantViolation = 27,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the eigensolvers; keeps the best residual reached so callers can
// decide whether to retry with another method.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual)
      : Error(ErrorKind::NoConvergence, message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace fpp
