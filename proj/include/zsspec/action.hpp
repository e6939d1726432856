#pragma once

#include "zsspec/problem.hpp"
#include "zsspec/turning.hpp"

namespace zs {

struct ActionValue {
  cplx value;
  cplx dvalue_dlambda;
  double quad_error_estimate = 0.0;
  int nodes_used = 0;
};

/// I(lambda, eps) = integral of sqrt(lambda^2 - A_eps(t)^2) along the straight segment from
/// alpha_eps to beta_eps, together with dI/dlambda.
///
/// With t = m - r cos(theta) (m the midpoint, r the half chord), the integrand factors as
/// r sin(theta) sqrt(q(t)) where q = (lambda^2 - A^2) / ((t - alpha)(beta - t)) is analytic and
/// nonvanishing on the segment, so both integrals become smooth periodic integrals in theta and
/// the midpoint rule converges geometrically. The branch of sqrt(q) is the one with positive real
/// part at the segment midpoint, continued node by node along the segment.
ActionValue action_integral(const Problem& problem, cplx lambda);
ActionValue action_integral(const Problem& problem, const TurningPointPair& pair);

cplx action_derivative(const Problem& problem, cplx lambda);

/// |conj(I(conj lambda)) - I(lambda)|; throws SymmetryRequired when the potential pair has no
/// parity symmetry.
double check_schwarz_symmetry(const Problem& problem, cplx lambda);

/// The same discrepancy without the symmetry precondition (used for broken-symmetry controls).
double schwarz_discrepancy(const Problem& problem, cplx lambda);

}  // namespace zs
