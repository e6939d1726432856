#pragma once

#include <array>
#include <string>
#include <vector>

#include "zsspec/problem.hpp"

namespace zs {

enum class Termination { StripBoundary, MaxLength, NearTurningPoint, StepFailure };

std::string to_string(Termination termination);
Termination termination_from_string(const std::string& name);

struct StokesCurve {
  int origin_index = 0;
  double initial_angle = 0.0;
  std::vector<cplx> points;
  Termination termination = Termination::MaxLength;
  /// Turning point reached for NearTurningPoint, -1 otherwise.
  int end_index = -1;
  /// Largest |Re Phi| / max(1, |Phi|) over the stored points, Phi the phase integral from the origin.
  double max_level_error = 0.0;
  double arc_length = 0.0;
};

struct StokesGraph {
  std::vector<cplx> turning_points;
  std::vector<StokesCurve> curves;
  std::vector<std::string> errors;
};

/// The three directions, sorted in [0, 2 pi), along which Re of the integral of
/// sqrt(A_eps^2 - lambda^2) from the simple turning point `tp` stays zero.
std::array<double, 3> stokes_directions(const Problem& problem, cplx lambda, cplx tp);

/// Traces one Stokes line by arc-length integration of dz/ds = i |w| / w, w = sqrt(A_eps^2 - lambda^2),
/// with fixed-step RK4 and a transverse Newton projection back onto the level set every 10 steps.
/// The first 1e-2 of the curve uses the local square-root model at the turning point.
StokesCurve trace_stokes_line(const Problem& problem, cplx lambda, const std::vector<cplx>& turning_points,
                              int origin_index, double angle);
StokesCurve trace_stokes_line(const Problem& problem, cplx lambda, cplx tp, double angle);

/// Both tracked turning points with their three Stokes lines each.
StokesGraph build_graph(const Problem& problem, cplx lambda);

/// True when some curve runs from one tracked turning point to the other.
bool has_connecting_curve(const StokesGraph& graph);

}  // namespace zs
