#pragma once

#include "zsspec/problem.hpp"

namespace zs::test {

// A = 2 - exp(-x^2), B = x exp(-x^2): even/odd pair, simple well around the bottom A = 1.
inline ProblemSpec well_spec(double eps = 0.0, double h = 0.05) {
  ProblemSpec s;
  s.potential = PotentialSpec::well_even(2.0, 1.0);
  s.lambda0 = 1.5;
  s.delta = 0.2;
  s.eps = eps;
  s.h = h;
  return s;
}

// A = 2 tanh x, B = exp(-x^2): odd/even pair, monotone profile.
inline ProblemSpec tanh_spec(double eps = 0.0, double h = 0.05) {
  ProblemSpec s;
  s.potential = PotentialSpec::monotone_odd(2.0);
  s.lambda0 = 1.0;
  s.delta = 0.3;
  s.eps = eps;
  s.h = h;
  return s;
}

// Same A as the well but B = exp(-x^2) is even too, so neither parity pairing holds.
inline ProblemSpec control_spec(double eps = 0.05, double h = 0.05) {
  ProblemSpec s = well_spec(eps, h);
  s.potential = PotentialSpec::custom({0, 0, 2, 1, 0, 2, -1, 1, 1, 2, 1, 1}, 10.0);
  return s;
}

}  // namespace zs::test
