#include "zsspec/turning.hpp"

#include <algorithm>
#include <cmath>

#include "zsspec/error.hpp"

namespace zs {

namespace {

double residual_scale(cplx lambda) { return std::max(1.0, std::norm(lambda)); }

void check_pair(const Problem& problem, TurningPointPair& pair) {
  if (std::abs(pair.beta - pair.alpha) < problem.tol().collision) {
    throw Error(ErrorCode::Collision, "turning points merged at z = " + std::to_string(pair.alpha.real()));
  }
}

}  // namespace

cplx polish_turning_point(const Problem& problem, cplx lambda, double eps, cplx seed, double& residual) {
  const auto& pot = problem.potential();
  const auto& tol = problem.tol();
  const double target = tol.root_residual * residual_scale(lambda);
  const cplx lambda_sq = lambda * lambda;
  cplx z = seed;
  for (int it = 0; it < tol.newton_cap; ++it) {
    if (std::abs(z.imag()) >= pot.strip_half_width) {
      throw Error(ErrorCode::LeftStrip, "turning point iterate left the analyticity strip");
    }
    const PotentialValue a = eval_potential_unchecked(pot, z, eps);
    const cplx f = a.value * a.value - lambda_sq;
    residual = std::abs(f);
    if (residual < target) return z;
    const cplx df = 2.0 * a.value * a.derivative;
    if (df == cplx(0.0)) break;
    const cplx step = f / df;
    z -= step;
    if (std::abs(step) < tol.root_step) {
      if (std::abs(z.imag()) >= pot.strip_half_width) break;
      const PotentialValue b = eval_potential_unchecked(pot, z, eps);
      residual = std::abs(b.value * b.value - lambda_sq);
      return z;
    }
  }
  throw Error(ErrorCode::NoConvergence, "turning point Newton iteration did not converge");
}

TurningPointPair find_turning_points(const Problem& problem, cplx lambda) {
  const auto& tol = problem.tol();
  const double level = std::abs(lambda.real());
  const auto crossings = real_level_crossings(problem.potential(), level, problem.spec().cutoff);

  TurningPointPair pair;
  pair.lambda = lambda;
  pair.eps = problem.eps();
  if (crossings.size() != 2) {
    throw Error(ErrorCode::NoConvergence,
                "expected two real seeds at Re(lambda), found " + std::to_string(crossings.size()));
  }
  pair.alpha = crossings[0];
  pair.beta = crossings[1];
  check_pair(problem, pair);

  const int steps = tol.homotopy_steps;
  // Im(lambda) homotopy at eps = 0, then eps homotopy at the target lambda.
  for (int s = 1; s <= steps; ++s) {
    const cplx lam(lambda.real(), lambda.imag() * s / steps);
    pair.alpha = polish_turning_point(problem, lam, 0.0, pair.alpha, pair.residual_alpha);
    pair.beta = polish_turning_point(problem, lam, 0.0, pair.beta, pair.residual_beta);
    check_pair(problem, pair);
  }
  for (int s = 1; s <= steps; ++s) {
    const double e = problem.eps() * s / steps;
    pair.alpha = polish_turning_point(problem, lambda, e, pair.alpha, pair.residual_alpha);
    pair.beta = polish_turning_point(problem, lambda, e, pair.beta, pair.residual_beta);
    check_pair(problem, pair);
  }
  return pair;
}

std::vector<TurningPointPair> continue_in_window(const Problem& problem, std::span<const cplx> lambda_path) {
  std::vector<TurningPointPair> out;
  if (lambda_path.empty()) return out;
  const double max_step = 0.1 * (problem.a1().beta0 - problem.a1().alpha0);
  out.reserve(lambda_path.size());
  out.push_back(find_turning_points(problem, lambda_path.front()));
  for (std::size_t i = 1; i < lambda_path.size(); ++i) {
    if (std::abs(lambda_path[i] - lambda_path[i - 1]) >= max_step) {
      throw Error(ErrorCode::PathStepTooLarge, "consecutive path points too far apart");
    }
    const TurningPointPair& prev = out.back();
    TurningPointPair next;
    next.lambda = lambda_path[i];
    next.eps = problem.eps();
    next.alpha = polish_turning_point(problem, next.lambda, next.eps, prev.alpha, next.residual_alpha);
    next.beta = polish_turning_point(problem, next.lambda, next.eps, prev.beta, next.residual_beta);
    check_pair(problem, next);
    if (!(std::abs(next.alpha - prev.alpha) < std::abs(next.alpha - prev.beta)) ||
        !(std::abs(next.beta - prev.beta) < std::abs(next.beta - prev.alpha))) {
      throw Error(ErrorCode::BranchSwap, "turning points swapped along the path");
    }
    out.push_back(next);
  }
  return out;
}

}  // namespace zs
