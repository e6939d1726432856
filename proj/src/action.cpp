#include "zsspec/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "zsspec/error.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sums {
  cplx value;
  cplx derivative;
  // rounding floor of each sum, from the cancellation in lambda^2 - A^2
  double value_noise = 0.0;
  double derivative_noise = 0.0;
};

// Midpoint rule on theta in (0, pi) with n nodes.
Sums midpoint_sums(const Problem& problem, const TurningPointPair& pair, int n) {
  const auto& pot = problem.potential();
  const double eps = pair.eps;
  const cplx lambda = pair.lambda;
  const cplx lambda_sq = lambda * lambda;
  const cplx r = 0.5 * (pair.beta - pair.alpha);

  // Subtracting the linear interpolant of the endpoint residuals makes the integrand vanish
  // exactly at the computed turning points. Without it a residual rho adds rho / (t - alpha)
  // to q, and the derivative sum grows linearly with n.
  auto residual = [&](cplx tp) {
    const cplx a = eval_potential_unchecked(pot, tp, eps).value;
    return lambda_sq - a * a;
  };
  const cplx rho_alpha = residual(pair.alpha);
  const cplx rho_beta = residual(pair.beta);

  std::vector<cplx> root(n);
  std::vector<double> sin_sq(n);
  std::vector<double> rel_noise(n);
  for (int j = 0; j < n; ++j) {
    const double theta = (j + 0.5) * kPi / n;
    const double half_sin = std::sin(0.5 * theta);
    const double half_cos = std::cos(0.5 * theta);
    // t - alpha = 2 r sin^2(theta/2), beta - t = 2 r cos^2(theta/2)
    const cplx t = pair.alpha + 2.0 * r * half_sin * half_sin;
    if (std::abs(t.imag()) >= pot.strip_half_width) {
      throw Error(ErrorCode::OutOfStrip, "integration segment leaves the analyticity strip");
    }
    const cplx a = eval_potential_unchecked(pot, t, eps).value;
    const cplx denom = 4.0 * r * r * half_sin * half_sin * half_cos * half_cos;
    const double u = half_sin * half_sin;  // (t - alpha) / (beta - alpha)
    const cplx g = lambda_sq - a * a - (rho_alpha * (1.0 - u) + rho_beta * u);
    root[j] = std::sqrt(g / denom);
    rel_noise[j] = 8.0 * std::numeric_limits<double>::epsilon() * (std::norm(a) + std::norm(lambda_sq)) /
                   std::max(std::abs(g), std::numeric_limits<double>::min());
    sin_sq[j] = std::sin(theta) * std::sin(theta);
  }

  // fix the branch at the middle node, then continue outward
  const int mid = n / 2;
  if (root[mid].real() < 0.0 || (root[mid].real() == 0.0 && root[mid].imag() < 0.0)) root[mid] = -root[mid];
  auto follow = [&](int from, int to) {
    const cplx prev = root[from];
    cplx cur = root[to];
    if (std::abs(cur - prev) > std::abs(cur + prev)) cur = -cur;
    const double jump = std::abs(std::arg(cur / prev));
    if (jump > 0.25 * kPi) {
      throw Error(ErrorCode::BranchAmbiguity, "square-root phase jump of " + std::to_string(jump) + " rad");
    }
    root[to] = cur;
  };
  for (int j = mid + 1; j < n; ++j) follow(j - 1, j);
  for (int j = mid - 1; j >= 0; --j) follow(j + 1, j);

  Sums s{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    s.value += sin_sq[j] * root[j];
    s.derivative += 1.0 / root[j];
    s.value_noise += sin_sq[j] * std::abs(root[j]) * rel_noise[j];
    s.derivative_noise += rel_noise[j] / std::abs(root[j]);
  }
  const double w = kPi / n;
  s.value *= w * r * r;
  s.derivative *= w * lambda;
  s.value_noise *= w * std::norm(r);
  s.derivative_noise *= w * std::abs(lambda);
  return s;
}

}  // namespace

ActionValue action_integral(const Problem& problem, const TurningPointPair& pair) {
  const auto& tol = problem.tol();
  if (std::abs(pair.beta - pair.alpha) < 1e-6) {
    throw Error(ErrorCode::DegenerateSegment, "turning points coincide");
  }
  int n = tol.quad_min_nodes;
  Sums prev = midpoint_sums(problem, pair, n);
  while (n < tol.quad_max_nodes) {
    n *= 2;
    const Sums cur = midpoint_sums(problem, pair, n);
    const double dv = std::abs(cur.value - prev.value);
    const double dd = std::abs(cur.derivative - prev.derivative);
    const bool value_ok = dv <= std::max(tol.quad_rel * std::abs(cur.value), 4.0 * cur.value_noise) || dv < 1e-300;
    const bool deriv_ok = dd <= std::max(tol.quad_rel * std::abs(cur.derivative), 4.0 * cur.derivative_noise);
    if (value_ok && deriv_ok) {
      return {cur.value, cur.derivative, dv, n};
    }
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNoConvergence, "action quadrature did not converge with " +
                                                      std::to_string(tol.quad_max_nodes) + " nodes");
}

ActionValue action_integral(const Problem& problem, cplx lambda) {
  TurningPointPair pair;
  try {
    pair = find_turning_points(problem, lambda);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Collision) throw Error(ErrorCode::DegenerateSegment, e.what());
    throw;
  }
  return action_integral(problem, pair);
}

cplx action_derivative(const Problem& problem, cplx lambda) {
  return action_integral(problem, lambda).dvalue_dlambda;
}

double schwarz_discrepancy(const Problem& problem, cplx lambda) {
  const cplx direct = action_integral(problem, lambda).value;
  const cplx mirrored = std::conj(action_integral(problem, std::conj(lambda)).value);
  return std::abs(mirrored - direct);
}

double check_schwarz_symmetry(const Problem& problem, cplx lambda) {
  if (problem.symmetry() == SymmetryClass::None) {
    throw Error(ErrorCode::SymmetryRequired, "potential pair has no parity symmetry");
  }
  return schwarz_discrepancy(problem, lambda);
}

}  // namespace zs
