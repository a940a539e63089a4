#include "partrec/error.hpp"

namespace partrec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::BadFirstIndex: return "BadFirstIndex";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::NegativeCutoff: return "NegativeCutoff";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::TooManyIndices: return "TooManyIndices";
    case ErrorCode::UnboundedSupport: return "UnboundedSupport";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NonIntegerGrid: return "NonIntegerGrid";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace partrec
