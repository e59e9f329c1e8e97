#pragma once

#include <stdexcept>
#include <string>

namespace wxspeed {

/**
 * @brief Machine-readable failure category carried by every library error.
 */
enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kDuplicate,
  kUnknownLink,
  kInsufficientData,
  kInvalidModel,
  kDegenerateVariance,
  kUndefinedPercentage,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

/**
 * @brief Exception type thrown by all wxspeed operations.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure that remembers the 1-based input line it came from.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + message), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wxspeed
