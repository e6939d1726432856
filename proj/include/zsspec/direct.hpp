#pragma once

#include <array>
#include <string>
#include <vector>

#include "zsspec/problem.hpp"
#include "zsspec/quantize.hpp"

namespace zs {

using Vec2 = std::array<cplx, 2>;

enum class Direction { FromLeft, FromRight };

/// A solution vector stored as a unit vector times exp(log_scale).
struct ScaledVector {
  Vec2 vector{};
  double log_scale = 0.0;
};

struct BoundaryData {
  double x_cut = 0.0;
  Direction direction = Direction::FromLeft;
  Vec2 seed_vector{};
  double log_scale = 0.0;
};

struct WronskianSample {
  cplx lambda;
  cplx w_value;
  double log_scale = 0.0;
};

struct Rectangle {
  cplx lower_left;
  cplx upper_right;
};

struct ZeroCount {
  Rectangle rectangle;
  int winding = 0;
  int samples_on_boundary = 0;
};

/// Right-hand side matrix of u' = M(x) u / h, i.e. M = [[-i lambda, A], [A, i lambda]].
std::array<cplx, 4> system_matrix(const Problem& problem, cplx lambda, double x);

/// Leading-order WKB data at the cut: from-left is the solution growing toward +x (decaying at
/// -infinity), from-right the one growing toward -x. Built from H = ((A + lambda)/(A - lambda))^(1/4)
/// scaled by H, so the seed is analytic in lambda.
BoundaryData boundary_seed(const Problem& problem, cplx lambda, Direction direction);
BoundaryData boundary_seed(const Problem& problem, cplx lambda, Direction direction, double x_cut);

/// Adaptive Dormand-Prince 5(4) integration of u' = M u / h from data.x_cut to x_target with the
/// vector renormalized after every accepted step.
ScaledVector integrate(const Problem& problem, cplx lambda, const BoundaryData& data, double x_target);
ScaledVector integrate(const Problem& problem, cplx lambda, const ScaledVector& start, double x_start,
                       double x_target);

/// det(u_left, u_right) at the matching point.
WronskianSample wronskian(const Problem& problem, cplx lambda);

/// Real eigenvalues in [lambda0 - delta, lambda0 + delta] from sign changes of the phase-aligned
/// Wronskian, refined by safeguarded secant bracketing. Requires eps = 0 or a symmetric pair.
std::vector<EigenvalueRecord> direct_spectrum_real(const Problem& problem);

/// Winding number of W around the rectangle boundary (argument principle).
ZeroCount count_zeros(const Problem& problem, Rectangle rectangle);

/// The window rectangle [lambda0 - delta, lambda0 + delta] x [-H, H], H = imag_half_height.
Rectangle window_rectangle(const Problem& problem);

struct ComplexSpectrum {
  std::vector<EigenvalueRecord> records;
  ZeroCount count;
  bool complete = false;
  std::vector<std::string> errors;
};

/// Complex Newton on W seeded from every eps = 0 real eigenvalue and continued in eps, followed by
/// a winding-number completeness check over the window rectangle.
ComplexSpectrum direct_spectrum_complex(const Problem& problem);

/// Single complex Newton solve of W = 0 from `seed` (derivative by central difference).
cplx newton_on_wronskian(const Problem& problem, cplx seed);

}  // namespace zs
