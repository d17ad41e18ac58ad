#include "aesthrec/error.hpp"

namespace aesthrec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kEmptyOutput: return "empty-output";
    case ErrorCode::kNumericInput: return "numeric-input";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kMissingFeature: return "missing-feature";
    case ErrorCode::kUnknownUser: return "unknown-user";
    case ErrorCode::kEmptyEvaluation: return "empty-evaluation";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string_view to_string(FormatErrorKind kind) noexcept {
  switch (kind) {
    case FormatErrorKind::kBadMagic: return "bad-magic";
    case FormatErrorKind::kVersionMismatch: return "version-mismatch";
    case FormatErrorKind::kTruncated: return "truncated";
    case FormatErrorKind::kInconsistentDimension: return "inconsistent-dimension";
    case FormatErrorKind::kTrailingData: return "trailing-data";
    case FormatErrorKind::kUnsortedIds: return "unsorted-ids";
  }
  return "unknown";
}

}  // namespace aesthrec
