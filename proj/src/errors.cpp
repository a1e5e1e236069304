#include "uavnoma/errors.hpp"

namespace uavnoma {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PartialCoverageRequired: return "PartialCoverageRequired";
    case ErrorCode::OutOfScanRange: return "OutOfScanRange";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::RadiusOutOfRegion: return "RadiusOutOfRegion";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::InfeasiblePowerSplit: return "InfeasiblePowerSplit";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EventImpossible: return "EventImpossible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace uavnoma
