#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlv {

enum class ErrorCode {
  ZeroDenominator,
  NonInvertibleDenominator,
  DivisionByZero,
  FieldMismatch,
  BlockMismatch,
  LengthMismatch,
  SizeError,
  ZeroPolynomial,
  ResourceLimit,
  WrongOrder,
  ShapeMismatch,
  ArityMismatch,
  BadCharacteristic,
  NotHomogeneous,
  NotForm,
  BadParams,
  TrivialSystem,
  SingularPivot,
  NotASolution,
  DegenerateSampling,
  PivotDenominatorZero,
  NoRationalPointFound,
  TooManyPolynomials,
  FiniteFieldUnsupported,
  UnknownSuite,
  MalformedInput,
  MalformedCert,
  CheckFailed,
};

std::string_view to_string(ErrorCode code);

/// Every contract violation in the library surfaces as an Error carrying a
/// machine-readable code; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mlv

/// Message expression is only evaluated on failure.
#define MLV_REQUIRE(cond, code, msg)         \
  do {                                       \
    if (!(cond)) ::mlv::fail((code), (msg)); \
  } while (0)
