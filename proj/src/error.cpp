#include "fairbench/error.hpp"

namespace fairbench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnexpectedColumn: return "UnexpectedColumn";
    case ErrorCode::UnparsableValue: return "UnparsableValue";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoEvaluableGroups: return "NoEvaluableGroups";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn:
    case ErrorCode::UnexpectedColumn:
    case ErrorCode::UnparsableValue:
    case ErrorCode::InvariantViolation:
    case ErrorCode::EmptyCohort:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InfeasibleSpec:
    case ErrorCode::TooFewSamples:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
    case ErrorCode::FormatError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

Error Error::with_context(std::string_view context) const {
  return Error(code_, "[" + std::string(context) + "] " + message_);
}

}  // namespace fairbench
