#pragma once

#include <string>
#include <vector>

#include "zsspec/problem.hpp"

namespace zs {

enum class Branch { HalfInteger, Integer };
enum class Method { Wkb, Direct };

std::string to_string(Branch branch);
std::string to_string(Method method);

struct EigenvalueRecord {
  cplx lambda;
  int k = 0;
  Branch branch = Branch::HalfInteger;
  Method method = Method::Wkb;
  double residual = 0.0;
  double h = 0.0;
  double eps = 0.0;
};

/// c_k = k + 1/2 on the half-integer branch, k on the integer branch.
double branch_offset(Branch branch);

Branch select_branch(const A1Report& report);

/// Indices k with c_k pi h in [action_low, action_high].
std::vector<int> indices_in_range(double action_low, double action_high, double h, Branch branch);

/// Indices whose quantized action lies in the eps = 0 action range over [lambda0 - delta, lambda0 + delta].
std::vector<int> enumerate_indices(const Problem& problem);

/// Newton solve of I(lambda, eps) = c_k pi h seeded by bisection of the eps = 0 problem.
EigenvalueRecord solve_quantization(const Problem& problem, int k);

struct WkbSpectrum {
  std::vector<EigenvalueRecord> records;
  std::vector<std::string> errors;
};

/// solve_quantization over all enumerated indices, sorted by Re(lambda). Per-index failures are
/// collected in `errors`.
WkbSpectrum wkb_spectrum(const Problem& problem);

}  // namespace zs
