#ifndef HILOK_ERROR_HPP
#define HILOK_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hilok {

/// Every failure the library reports carries one of these kinds. The CLI maps
/// them onto exit codes (see tools/hilok.cpp).
enum class ErrorKind {
  SyntaxError,
  NotPrime,
  ReducibleModulus,
  Unsupported,
  SpecMismatch,
  DivisionByZero,
  PrecisionExhausted,
  ZeroOrUnknownLeadingTerm,
  NegativeValuation,
  TorsionRing,
  LengthMismatch,
  ResidueMismatch,
  DegreeMismatch,
  WindowTooSmall,
  NonConvergence,
  ZeroEntry,
  LevelCapReached,
  NotAClass,
  NonUnitEntry,
  DimensionMismatch,
  TrivialExtension,
  InternalInconsistency,
  MultipleLEntries,
  HypothesisViolation,
  TooLarge,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::ZeroOrUnknownLeadingTerm: return "ZeroOrUnknownLeadingTerm";
    case ErrorKind::NegativeValuation: return "NegativeValuation";
    case ErrorKind::TorsionRing: return "TorsionRing";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ResidueMismatch: return "ResidueMismatch";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::LevelCapReached: return "LevelCapReached";
    case ErrorKind::NotAClass: return "NotAClass";
    case ErrorKind::NonUnitEntry: return "NonUnitEntry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TrivialExtension: return "TrivialExtension";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::MultipleLEntries: return "MultipleLEntries";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(ErrorKind kind, std::string op, std::string detail)
      : std::runtime_error(std::string(to_string(kind)) + " in " + op + ": " + detail),
        kind_(kind),
        op_(std::move(op)),
        detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& operation() const noexcept { return op_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string op_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string op, std::string detail) {
  throw error(kind, std::move(op), std::move(detail));
}

}  // namespace hilok

#endif  // HILOK_ERROR_HPP
