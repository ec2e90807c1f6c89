#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drlq {

enum class ErrorCode {
  NonIncreasingInterval,
  GridTooCoarse,
  ShapeMismatch,
  NonFiniteState,
  SingularShootingJacobian,
  NoUsableJunction,
  UnsupportedActiveSet,
  ParseError,
  ValidationError,
  InfeasibleDiscretization,
  IterationLimit,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace drlq
