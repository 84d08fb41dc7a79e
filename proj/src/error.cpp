#include "h2body/error.hpp"

namespace h2body {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::NotOnGeodesic: return "NotOnGeodesic";
    case ErrorCode::NotPerpendicular: return "NotPerpendicular";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::Collision: return "Collision";
    case ErrorCode::NotCanonical: return "NotCanonical";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::MassDistanceMismatch: return "MassDistanceMismatch";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
  }
  return "Unknown";
}

}  // namespace h2body
