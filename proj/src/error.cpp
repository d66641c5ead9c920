#include "nicd/error.hpp"

namespace nicd {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NegativeEntryForLowNorm: return "NegativeEntryForLowNorm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyStartSet: return "EmptyStartSet";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MissingPlayerFunction: return "MissingPlayerFunction";
    case ErrorCode::UnbalancedFunction: return "UnbalancedFunction";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::TooLargeForBruteForce: return "TooLargeForBruteForce";
    case ErrorCode::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotErgodic: return "NotErgodic";
    case ErrorCode::InapplicableHypotheses: return "InapplicableHypotheses";
    case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
  }
  return "UnknownError";
}

}  // namespace nicd
