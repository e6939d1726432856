#pragma once

#include <span>
#include <vector>

#include "zsspec/problem.hpp"

namespace zs {

/// The two tracked zeros of A_eps(z)^2 - lambda^2 near alpha0 and beta0.
struct TurningPointPair {
  cplx alpha;
  cplx beta;
  double residual_alpha = 0.0;
  double residual_beta = 0.0;
  cplx lambda;
  double eps = 0.0;
};

/// Newton polish of one zero of A_eps^2 - lambda^2 starting from `seed`.
/// Returns the root and writes its residual.
cplx polish_turning_point(const Problem& problem, cplx lambda, double eps, cplx seed, double& residual);

/// Seeds at the real crossings of |A| = Re(lambda) for eps = 0, then homotopy in Im(lambda)
/// and eps with a fixed number of steps each.
TurningPointPair find_turning_points(const Problem& problem, cplx lambda);

/// Follows the pair along a path of spectral parameters, each solve seeded by the previous.
std::vector<TurningPointPair> continue_in_window(const Problem& problem, std::span<const cplx> lambda_path);

}  // namespace zs
