#include "tcm/errors.hpp"

namespace tcm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NonzeroRequired: return "NonzeroRequired";
    case ErrorKind::FactorizationTooLarge: return "FactorizationTooLarge";
    case ErrorKind::NotArithmetic: return "NotArithmetic";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ScalarMatrix: return "ScalarMatrix";
    case ErrorKind::ConditionStarViolated: return "ConditionStarViolated";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::OrderOverflow: return "OrderOverflow";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::PoleAtLambda: return "PoleAtLambda";
    case ErrorKind::NoInteriorRoot: return "NoInteriorRoot";
    case ErrorKind::RecognitionFailed: return "RecognitionFailed";
    case ErrorKind::NotClearable: return "NotClearable";
    case ErrorKind::NothingRecognized: return "NothingRecognized";
  }
  return "Unknown";
}

}  // namespace tcm
