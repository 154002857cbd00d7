#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geocontract {

enum class ErrorCode {
  ParseError,
  TopologyError,
  FrameMismatch,
  RadiusTooSmall,
  NotAGoodCover,
  DisconnectedElement,
  LoopEscapesElement,
  EdgeTooLong,
  TooLargeToEnumerate,
  NoItinerary,
  CannotShorten,
  ContractViolation,
  DifferentApproximations,
  BasepointMismatch,
  IterationCapExceeded,
  SingleStepTooWide,
  TreeInvariantViolation,
  NoDuplicateFound,
  HypothesisViolated,
  WidthBoundViolated,
  SerializationError,
  MissingArtifact,
  ConfigError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geocontract
