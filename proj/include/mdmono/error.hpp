#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdmono {

enum class ErrorCode {
  UnknownVertex,
  OverlappingSets,
  MalformedContext,
  NotIndicator,
  InvalidGraph,
  ConditioningOnNull,
  UnboundVariable,
  NotObservable,
  ZeroDenominator,
  NotApplicable,
  NoApplicableTheorem,
  BadGamma,
  MissingPath,
  InfeasibleA,
  ConstructionFailed,
  SyntaxError,
  SemanticError,
  BadInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::MalformedContext: return "MalformedContext";
    case ErrorCode::NotIndicator: return "NotIndicator";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::ConditioningOnNull: return "ConditioningOnNull";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NotObservable: return "NotObservable";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NoApplicableTheorem: return "NoApplicableTheorem";
    case ErrorCode::BadGamma: return "BadGamma";
    case ErrorCode::MissingPath: return "MissingPath";
    case ErrorCode::InfeasibleA: return "InfeasibleA";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mdmono
