#include "zsspec/problem.hpp"

#include <cmath>

#include "zsspec/error.hpp"

namespace zs {

namespace {

constexpr double kFarField = 50.0;
constexpr double kCutoffPad = 2.0;

// First x beyond the crossing (walking in `dir`) where |A| - lambda0 reaches half the
// asymptotic margin on that side, plus the fixed pad.
double default_cut(const PotentialSpec& pot, double lambda0, double start, double dir, double scale) {
  auto abs_a = [&](double x) { return std::abs(eval_potential_unchecked(pot, x, 0.0).value.real()); };
  const double margin = abs_a(dir * kFarField) - lambda0;
  double x = start;
  constexpr double kStep = 1e-3;
  while (std::abs(x) < kFarField && abs_a(x) - lambda0 < 0.5 * margin) x += dir * kStep;
  const double cut = x + dir * kCutoffPad;
  return start + scale * (cut - start);
}

}  // namespace

Problem::Problem(ProblemSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.h > 0.0)) throw Error(ErrorCode::InvalidSpec, "h must be positive");
  if (!(spec_.delta > 0.0)) throw Error(ErrorCode::InvalidSpec, "delta must be positive");
  if (!(spec_.eps >= 0.0)) throw Error(ErrorCode::InvalidSpec, "eps must be non-negative");
  if (!(spec_.cutoff_scale > 0.0)) throw Error(ErrorCode::InvalidSpec, "cutoff_scale must be positive");
  a1_ = validate_A1(spec_.potential, spec_.lambda0, spec_.cutoff);
  symmetry_ = classify_symmetry(spec_.potential, spec_.cutoff);
  x_left_ = spec_.x_left ? *spec_.x_left
                         : default_cut(spec_.potential, spec_.lambda0, a1_.alpha0, -1.0, spec_.cutoff_scale);
  x_right_ = spec_.x_right ? *spec_.x_right
                           : default_cut(spec_.potential, spec_.lambda0, a1_.beta0, 1.0, spec_.cutoff_scale);
  if (!(x_left_ < a1_.alpha0 && x_right_ > a1_.beta0)) {
    throw Error(ErrorCode::InvalidSpec, "shooting cutoffs must enclose the well");
  }
}

double Problem::imag_half_height() const {
  return spec_.imag_half_height > 0.0 ? spec_.imag_half_height : 0.5 * spec_.delta;
}

Problem Problem::with_eps(double eps) const {
  ProblemSpec s = spec_;
  s.eps = eps;
  return Problem(std::move(s));
}

Problem Problem::with_h(double h) const {
  ProblemSpec s = spec_;
  s.h = h;
  return Problem(std::move(s));
}

}  // namespace zs
