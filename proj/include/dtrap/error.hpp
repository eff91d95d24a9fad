#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtrap {

enum class ErrorCode {
  DivisionByZero,
  UnknownVariable,
  NotAPthPower,
  DepthExceeded,
  SizeCap,
  AmbientTooSmall,
  Precondition,
  Inapplicable,
  BadParameter,
  ParseError,
  UnknownName,
  DuplicateName,
  BadPrime,
  Overflow,
  Internal,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::UnknownVariable: return "UNKNOWN_VARIABLE";
    case ErrorCode::NotAPthPower: return "NOT_A_PTH_POWER";
    case ErrorCode::DepthExceeded: return "DEPTH_EXCEEDED";
    case ErrorCode::SizeCap: return "SIZE_CAP";
    case ErrorCode::AmbientTooSmall: return "AMBIENT_TOO_SMALL";
    case ErrorCode::Precondition: return "PRECONDITION";
    case ErrorCode::Inapplicable: return "INAPPLICABLE";
    case ErrorCode::BadParameter: return "BAD_PARAMETER";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UnknownName: return "UNKNOWN_NAME";
    case ErrorCode::DuplicateName: return "DUPLICATE_NAME";
    case ErrorCode::BadPrime: return "BAD_PRIME";
    case ErrorCode::Overflow: return "OVERFLOW";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library. The code is stable and is what the
/// report layer serializes; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Errors that point into scenario text (1-based line and column).
class SourceError : public Error {
 public:
  SourceError(ErrorCode code, const std::string& message, int line, int column,
              std::string token)
      : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " +
                        message + (token.empty() ? "" : " near '" + token + "'")),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

}  // namespace dtrap
