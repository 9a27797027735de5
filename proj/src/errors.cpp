#include "whipgeo/errors.hpp"

namespace whip {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OddNodeCount: return "OddNodeCount";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::StencilOrder: return "StencilOrder";
    case ErrorKind::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::FlatCurve: return "FlatCurve";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::DriftBudgetExceeded: return "DriftBudgetExceeded";
    case ErrorKind::IncompatibleInitialData: return "IncompatibleInitialData";
    case ErrorKind::ParallelSection: return "ParallelSection";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ReconstructionDrift: return "ReconstructionDrift";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

WhipError::WhipError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw WhipError(kind, what); }

}  // namespace whip
