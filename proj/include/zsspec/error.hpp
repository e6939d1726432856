#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zs {

enum class ErrorCode {
  // potential
  OutOfStrip,
  InvalidSpec,
  A1Violated,
  // turning
  NoConvergence,
  LeftStrip,
  Collision,
  BranchSwap,
  PathStepTooLarge,
  // action
  QuadratureNoConvergence,
  BranchAmbiguity,
  DegenerateSegment,
  SymmetryRequired,
  // quantize
  EmptyWindow,
  LeftWindow,
  // direct
  InsideWell,
  StepUnderflow,
  PhaseTrackingLost,
  BoundaryZero,
  PhaseResolution,
  // stokes
  DegenerateTurningPoint,
  StepFailure,
  // cli
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Reason attached to an A1Violated error.
enum class A1Reason { None, ZeroSlope, ExtraCrossings, MissingCrossings, NoMarginAtInfinity };

std::string_view to_string(A1Reason reason);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, A1Reason reason = A1Reason::None)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), reason_(reason) {}

  ErrorCode code() const noexcept { return code_; }
  A1Reason reason() const noexcept { return reason_; }

 private:
  ErrorCode code_;
  A1Reason reason_;
};

}  // namespace zs
