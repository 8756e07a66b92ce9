#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sulfex {

enum class ErrorCode {
  // input validation
  DimensionMismatch,
  NonFiniteValue,
  InvalidArgument,
  TooFewSamples,
  InvalidAlpha,
  TooFewRows,
  MissingField,
  NegativeTime,
  ParseError,
  RangeViolation,
  DuplicateId,
  DuplicateTimestamp,
  EmptyInput,
  SchemaVersionMismatch,
  IoError,
  // numerical failures
  SingularMatrix,
  NoConvergence,
  NonPositiveTrend,
  TooFewPoints,
  RankDeficient,
  ConstantResponse,
  SingleClass,
  EmptyGroup,
  NonIncreasing,
  AlreadyFailed,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by malformed or out-of-range input (CLI exit 2);
/// false for numerical failures on otherwise valid input (CLI exit 3).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& stage() const noexcept { return stage_; }

  /// Same error, re-tagged with a pipeline stage ("clustering", "regression", ...).
  Error with_stage(std::string stage) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::string stage_;
};

}  // namespace sulfex
