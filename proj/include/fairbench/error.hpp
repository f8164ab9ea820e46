#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairbench {

enum class ErrorCode {
  MissingColumn,
  UnexpectedColumn,
  UnparsableValue,
  InvariantViolation,
  EmptyCohort,
  InvalidSpec,
  InfeasibleSpec,
  TooFewSamples,
  InvalidArgument,
  InvalidConfig,
  FormatError,
  DimensionMismatch,
  SingleClassTraining,
  NonFiniteInput,
  LengthMismatch,
  EmptyInput,
  NoEvaluableGroups,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Validation errors come from bad user input (config, spec, CSV); the CLI
// maps them to exit code 1 and everything else to exit code 2.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

  // Same code, message prefixed with `[context]`.
  Error with_context(std::string_view context) const;

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace fairbench
