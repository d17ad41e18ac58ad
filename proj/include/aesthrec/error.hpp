#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aesthrec {

enum class ErrorCode {
  kParse,
  kValidation,
  kInsufficientData,
  kEmptyInput,
  kEmptyOutput,
  kNumericInput,
  kFormat,
  kMissingFeature,
  kUnknownUser,
  kEmptyEvaluation,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

// Base of every error raised by the library. The message never contains a
// newline so the CLI can print it as a single machine-parsable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class FormatErrorKind {
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kInconsistentDimension,
  kTrailingData,
  kUnsortedIds,
};

std::string_view to_string(FormatErrorKind kind) noexcept;

class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& message)
      : Error(ErrorCode::kFormat,
              std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  FormatErrorKind kind() const noexcept { return kind_; }

 private:
  FormatErrorKind kind_;
};

class MissingFeatureError : public Error {
 public:
  explicit MissingFeatureError(const std::string& photo_id)
      : Error(ErrorCode::kMissingFeature,
              "no feature vector for photo '" + photo_id + "'"),
        photo_id_(photo_id) {}

  const std::string& photo_id() const noexcept { return photo_id_; }

 private:
  std::string photo_id_;
};

}  // namespace aesthrec
