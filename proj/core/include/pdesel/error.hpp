#pragma once

#include <stdexcept>
#include <string>

namespace pdesel {

/// Failure categories surfaced by the toolkit. Callers that need to branch on
/// the cause (tests, the CLI exit-code mapping) match on the code instead of
/// parsing messages.
enum class ErrorCode {
  InvalidArgument,
  RankDeficient,
  EmptySupport,
  ExactFit,
  NotPositiveDefinite,
  NegativeUncertainty,
  UnstableCoefficient,
  ZeroIntercept,
  DegenerateU,
  UnstableSimulation,
  TooFewInteriorPoints,
  MixedCriteria,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pdesel
