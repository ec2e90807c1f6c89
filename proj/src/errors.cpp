#include "drlq/errors.hpp"

namespace drlq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIncreasingInterval: return "NonIncreasingInterval";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::SingularShootingJacobian: return "SingularShootingJacobian";
    case ErrorCode::NoUsableJunction: return "NoUsableJunction";
    case ErrorCode::UnsupportedActiveSet: return "UnsupportedActiveSet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InfeasibleDiscretization: return "InfeasibleDiscretization";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace drlq
