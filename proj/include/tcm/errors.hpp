#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcm {

enum class ErrorKind {
  Parse,
  NonzeroRequired,
  FactorizationTooLarge,
  NotArithmetic,
  CalibrationFailed,
  SingularBasis,
  PoleHit,
  UnknownName,
  ScalarMatrix,
  ConditionStarViolated,
  NotElliptic,
  OrderOverflow,
  DomainViolation,
  DegenerateDenominator,
  TruncationBudgetExceeded,
  Indeterminate,
  PoleAtLambda,
  NoInteriorRoot,
  RecognitionFailed,
  NotClearable,
  NothingRecognized,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tcm
