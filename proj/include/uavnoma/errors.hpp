#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uavnoma {

enum class ErrorCode {
  InvalidArgument,
  PartialCoverageRequired,
  OutOfScanRange,
  NonPositiveDistance,
  RankOutOfRange,
  RadiusOutOfRegion,
  OrderViolation,
  InfeasiblePowerSplit,
  QuadratureFailure,
  EventImpossible,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code() when they
// need to distinguish failure modes (the CLI serializes it into its error record).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace uavnoma
