#include "zeroleak/error.hpp"

namespace zeroleak {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kStochasticityError: return "StochasticityError";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kInternalError: return "InternalError";
    case ErrorCode::kNotInPhat: return "NotInPhat";
    case ErrorCode::kInfeasibleBoundLp: return "InfeasibleBoundLP";
    case ErrorCode::kNotDecodable: return "NotDecodable";
    case ErrorCode::kIncompleteMechanism: return "IncompleteMechanism";
    case ErrorCode::kWrongRegime: return "WrongRegime";
    case ErrorCode::kMalformedBits: return "MalformedBits";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace zeroleak
