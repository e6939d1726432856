#pragma once

#include <optional>

#include "zsspec/potential.hpp"

namespace zs {

/// Named numerical tolerances. Defaults are the values the solvers are validated with.
struct Tolerances {
  // turning points
  double root_residual = 1e-12;
  double root_step = 1e-14;
  double collision = 1e-6;
  int homotopy_steps = 8;
  int newton_cap = 50;
  // action quadrature
  double quad_rel = 1e-12;
  int quad_min_nodes = 32;
  int quad_max_nodes = 4096;
  // quantization
  double quantize_residual = 1e-12;
  // shooting
  double ode_rel = 1e-10;
  double ode_abs = 1e-13;
  double ode_min_step = 1e-13;
  double bracket = 1e-12;
  double newton_fd_step = 1e-7;
  double distinct = 1e-9;
  double boundary_zero = 1e-8;
  int winding_max_samples = 1 << 16;
  // stokes
  double stokes_step = 1e-3;
  double stokes_max_length = 20.0;
  double stokes_start = 1e-2;
};

struct ProblemSpec {
  PotentialSpec potential;
  double lambda0 = 1.5;
  double delta = 0.2;
  double eps = 0.0;
  double h = 0.05;
  /// Sampling range [-cutoff, cutoff] for the well validation.
  double cutoff = 8.0;
  /// Half height of the complex search rectangle; 0 selects delta / 2.
  double imag_half_height = 0.0;
  /// Explicit shooting cutoffs; unset selects the margin-based defaults.
  std::optional<double> x_left;
  std::optional<double> x_right;
  /// Distances of the default shooting cutoffs from the well are multiplied by this.
  double cutoff_scale = 1.0;
  double matching_shift = 0.0;
  Tolerances tol;
};

/// A validated spectral problem: spec plus the derived well geometry.
class Problem {
 public:
  explicit Problem(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  const PotentialSpec& potential() const { return spec_.potential; }
  const Tolerances& tol() const { return spec_.tol; }
  double eps() const { return spec_.eps; }
  double h() const { return spec_.h; }
  double lambda0() const { return spec_.lambda0; }
  double delta() const { return spec_.delta; }
  double imag_half_height() const;

  const A1Report& a1() const { return a1_; }
  SymmetryClass symmetry() const { return symmetry_; }
  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  double x_match() const { return 0.5 * (a1_.alpha0 + a1_.beta0) + spec_.matching_shift; }

  Problem with_eps(double eps) const;
  Problem with_h(double h) const;

 private:
  ProblemSpec spec_;
  A1Report a1_;
  SymmetryClass symmetry_ = SymmetryClass::None;
  double x_left_ = 0.0;
  double x_right_ = 0.0;
};

}  // namespace zs
