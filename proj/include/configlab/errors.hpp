#pragma once

#include <stdexcept>
#include <string>

namespace configlab {

// Error taxonomy. `kind` is stable and machine-checkable; the CLI maps
// kinds to exit codes (config -> 2, numeric precondition -> 3).
enum class ErrorKind {
  // configuration / lookup errors
  ParseError,
  UnknownMap,
  DimensionMismatch,
  // numerical precondition violations
  InvalidArgument,
  SingularConfiguration,
  MaxKExceeded,
  Unsupported,
  InfeasiblePacking,
  InsufficientResolution,
  BudgetTooSmall,
  ResolutionConflict,
  DegenerateFit,
  AllPairsDegenerate,
  AliasLimit,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  bool is_config_error() const {
    return kind_ == ErrorKind::ParseError || kind_ == ErrorKind::UnknownMap ||
           kind_ == ErrorKind::DimensionMismatch;
  }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownMap: return "UnknownMap";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularConfiguration: return "SingularConfiguration";
    case ErrorKind::MaxKExceeded: return "MaxKExceeded";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::InfeasiblePacking: return "InfeasiblePacking";
    case ErrorKind::InsufficientResolution: return "InsufficientResolution";
    case ErrorKind::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorKind::ResolutionConflict: return "ResolutionConflict";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::AllPairsDegenerate: return "AllPairsDegenerate";
    case ErrorKind::AliasLimit: return "AliasLimit";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace configlab
