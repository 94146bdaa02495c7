#pragma once

#include <stdexcept>
#include <string>

namespace ordscore {

enum class ErrorCode {
  InvalidDegree,
  InvalidKnots,
  DegenerateScores,
  InvalidProbability,
  SingularDesign,
  InsufficientData,
  IrlsDidNotConverge,
  ConfigError,
  DataError,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code says which contract was broken.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by user input (config or data) rather than numerics.
  bool is_input_error() const noexcept {
    return code_ == ErrorCode::ConfigError || code_ == ErrorCode::DataError;
  }

private:
  ErrorCode code_;
};

}  // namespace ordscore
