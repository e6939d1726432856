#include "zsspec/error.hpp"

namespace zs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfStrip: return "OutOfStrip";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::A1Violated: return "A1Violated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LeftStrip: return "LeftStrip";
    case ErrorCode::Collision: return "Collision";
    case ErrorCode::BranchSwap: return "BranchSwap";
    case ErrorCode::PathStepTooLarge: return "PathStepTooLarge";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::SymmetryRequired: return "SymmetryRequired";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::LeftWindow: return "LeftWindow";
    case ErrorCode::InsideWell: return "InsideWell";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::PhaseTrackingLost: return "PhaseTrackingLost";
    case ErrorCode::BoundaryZero: return "BoundaryZero";
    case ErrorCode::PhaseResolution: return "PhaseResolution";
    case ErrorCode::DegenerateTurningPoint: return "DegenerateTurningPoint";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string_view to_string(A1Reason reason) {
  switch (reason) {
    case A1Reason::None: return "none";
    case A1Reason::ZeroSlope: return "zero-slope";
    case A1Reason::ExtraCrossings: return "extra-crossings";
    case A1Reason::MissingCrossings: return "missing-crossings";
    case A1Reason::NoMarginAtInfinity: return "no-margin-at-infinity";
  }
  return "unknown";
}

}  // namespace zs
