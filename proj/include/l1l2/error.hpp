#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l1l2 {

enum class ErrorCode {
  // instance validation
  DimensionMismatch,
  ZeroObservation,
  BadExponent,
  NonFinite,
  BadGamma,
  SchemaError,
  // evaluation
  ZeroPoint,
  ConeViolation,
  EmptySupport,
  MixedSignQCheck,
  // calculus
  ZeroDenominator,
  ZeroEntryOnSupport,
  CollinearInput,
  CauchySchwarzViolated,
  // bounds and certification
  ZeroMatrix,
  RankDeficientSupport,
  NonPositiveGamma,
  UncertifiedPoint,
  WrongModel,
  Unsupported,
  // solver
  DivergenceDetected,
  ZeroCollapse,
  // reductions
  BudgetExceeded,
  TooFewWeights,
  ShapeViolation,
  InvalidPartition,
  BadArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace l1l2
