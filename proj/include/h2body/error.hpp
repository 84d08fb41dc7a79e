#pragma once

#include <stdexcept>
#include <string>

namespace h2body {

enum class ErrorCode {
  InvalidArgument,
  CoincidentPoints,
  NotOnGeodesic,
  NotPerpendicular,
  ZeroVector,
  Collision,
  NotCanonical,
  NonPositiveDistance,
  MassDistanceMismatch,
  NotCritical,
  OutOfRange,
  StepSizeUnderflow,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every library failure goes through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace h2body
