#include "sulfex/error.hpp"

namespace sulfex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonPositiveTrend: return "NonPositiveTrend";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ConstantResponse: return "ConstantResponse";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::NonIncreasing: return "NonIncreasing";
    case ErrorCode::AlreadyFailed: return "AlreadyFailed";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::InvalidArgument:
    case ErrorCode::TooFewSamples:
    case ErrorCode::InvalidAlpha:
    case ErrorCode::TooFewRows:
    case ErrorCode::MissingField:
    case ErrorCode::NegativeTime:
    case ErrorCode::ParseError:
    case ErrorCode::RangeViolation:
    case ErrorCode::DuplicateId:
    case ErrorCode::DuplicateTimestamp:
    case ErrorCode::EmptyInput:
    case ErrorCode::SchemaVersionMismatch:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

namespace {

std::string compose(ErrorCode code, const std::string& detail, const std::string& stage) {
  std::string msg;
  if (!stage.empty()) msg += stage + ": ";
  msg += to_string(code);
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail, std::string stage)
    : std::runtime_error(compose(code, detail, stage)),
      code_(code),
      detail_(detail),
      stage_(std::move(stage)) {}

Error Error::with_stage(std::string stage) const { return Error(code_, detail_, std::move(stage)); }

}  // namespace sulfex
