#include "gradflow/errors.hpp"

namespace gradflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorCode::RowSumNonzero: return "RowSumNonzero";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvalidTangentVector: return "InvalidTangentVector";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::ZeroGenerator: return "ZeroGenerator";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorCode::DegenerateN: return "DegenerateN";
    case ErrorCode::SingularQbar: return "SingularQbar";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::LeftSimplex: return "LeftSimplex";
    case ErrorCode::AtEquilibrium: return "AtEquilibrium";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::PerturbationTooLarge: return "PerturbationTooLarge";
    case ErrorCode::SupportTouchesEquilibrium: return "SupportTouchesEquilibrium";
    case ErrorCode::SupportLeavesSimplex: return "SupportLeavesSimplex";
    case ErrorCode::InvalidPi: return "InvalidPi";
    case ErrorCode::InvalidV: return "InvalidV";
    case ErrorCode::MuTooLarge: return "MuTooLarge";
    case ErrorCode::ExhaustedTries: return "ExhaustedTries";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

}  // namespace gradflow
