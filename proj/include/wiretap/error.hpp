#pragma once

#include <stdexcept>
#include <string>

namespace wiretap {

enum class ErrorCode {
  NonPositiveVariance,
  DimensionMismatch,
  NegativeDemand,
  NotPositiveDefinite,
  EmptySubset,
  InvalidPermutation,
  TooManyUsers,
  NonPositiveTerm,
  NonPositiveAnchor,
  InfeasibleAnchor,
  Infeasible,
  NumericalFailure,
  EmptyInput,
  NoFeasiblePoint,
  InvalidArgument,
  ConfigError,
  IoError,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeDemand: return "NegativeDemand";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::TooManyUsers: return "TooManyUsers";
    case ErrorCode::NonPositiveTerm: return "NonPositiveTerm";
    case ErrorCode::NonPositiveAnchor: return "NonPositiveAnchor";
    case ErrorCode::InfeasibleAnchor: return "InfeasibleAnchor";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Base exception for the library. Every failure carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wiretap
