#ifndef ZEROLEAK_ERROR_HPP_
#define ZEROLEAK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace zeroleak {

// Numeric values are mirrored by zl_status in zeroleak.h.
enum class ErrorCode : int {
  kOk = 0,
  kBadShape = 1,
  kEmptySupport = 2,
  kParseError = 3,
  kStochasticityError = 4,
  kNumericalFailure = 5,
  kInfeasible = 6,
  kInternalError = 7,
  kNotInPhat = 8,
  kInfeasibleBoundLp = 9,
  kNotDecodable = 10,
  kIncompleteMechanism = 11,
  kWrongRegime = 12,
  kMalformedBits = 13,
  kInvalidArgument = 14,
  kIoError = 15,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zeroleak

#endif  // ZEROLEAK_ERROR_HPP_
