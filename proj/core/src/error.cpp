#include "fpp/error.hpp"

namespace fpp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::EmptyInput: return "empty input";
    case ErrorKind::NotSymmetric: return "not symmetric";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::RankDeficient: return "rank deficient";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::BadMagic: return "bad magic";
    case ErrorKind::UnsupportedVersion: return "unsupported version";
    case ErrorKind::Truncated: return "truncated";
    case ErrorKind::TrailingData: return "trailing data";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::InvariantViolation: return "invariant violation";
  }
  return "unknown error";
}

}  // namespace fpp
