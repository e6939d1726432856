#include "zsspec/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zsspec/action.hpp"
#include "zsspec/error.hpp"

namespace zs {

std::string to_string(Branch branch) { return branch == Branch::HalfInteger ? "half-integer" : "integer"; }

std::string to_string(Method method) { return method == Method::Wkb ? "wkb" : "direct"; }

double branch_offset(Branch branch) { return branch == Branch::HalfInteger ? 0.5 : 0.0; }

Branch select_branch(const A1Report& report) {
  return report.well_type == WellType::SimpleWell ? Branch::HalfInteger : Branch::Integer;
}

std::vector<int> indices_in_range(double action_low, double action_high, double h, Branch branch) {
  const double quantum = std::numbers::pi * h;
  const double offset = branch_offset(branch);
  const int first = static_cast<int>(std::ceil(action_low / quantum - offset));
  const int last = static_cast<int>(std::floor(action_high / quantum - offset));
  std::vector<int> out;
  for (int k = first; k <= last; ++k) out.push_back(k);
  if (out.empty()) {
    throw Error(ErrorCode::EmptyWindow, "no quantized action level in [" + std::to_string(action_low) + ", " +
                                            std::to_string(action_high) + "]");
  }
  return out;
}

std::vector<int> enumerate_indices(const Problem& problem) {
  const Problem reference = problem.with_eps(0.0);
  const double low = action_integral(reference, problem.lambda0() - problem.delta()).value.real();
  const double high = action_integral(reference, problem.lambda0() + problem.delta()).value.real();
  return indices_in_range(low, high, problem.h(), select_branch(problem.a1()));
}

EigenvalueRecord solve_quantization(const Problem& problem, int k) {
  const auto& tol = problem.tol();
  const Branch branch = select_branch(problem.a1());
  const double target = (k + branch_offset(branch)) * std::numbers::pi * problem.h();

  // real seed from the eps = 0 problem, where I is real and increasing on the window
  const Problem reference = problem.with_eps(0.0);
  double lo = problem.lambda0() - problem.delta();
  double hi = problem.lambda0() + problem.delta();
  auto reference_action = [&](double lam) { return action_integral(reference, lam).value.real(); };
  if (!(reference_action(lo) <= target && target <= reference_action(hi))) {
    throw Error(ErrorCode::LeftWindow, "quantized action for k = " + std::to_string(k) + " lies outside the window");
  }
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (reference_action(mid) < target ? lo : hi) = mid;
  }

  EigenvalueRecord rec;
  rec.k = k;
  rec.branch = branch;
  rec.method = Method::Wkb;
  rec.h = problem.h();
  rec.eps = problem.eps();
  cplx lambda = 0.5 * (lo + hi);
  for (int it = 0; it <= tol.newton_cap; ++it) {
    if (std::abs(lambda - problem.lambda0()) > problem.delta()) {
      throw Error(ErrorCode::LeftWindow, "Newton iterate left the spectral window");
    }
    const ActionValue act = action_integral(problem, lambda);
    const cplx mismatch = act.value - target;
    rec.residual = std::abs(mismatch);
    if (rec.residual < tol.quantize_residual) {
      rec.lambda = lambda;
      return rec;
    }
    if (it == tol.newton_cap) break;
    lambda -= mismatch / act.dvalue_dlambda;
  }
  throw Error(ErrorCode::NoConvergence, "quantization Newton did not converge for k = " + std::to_string(k));
}

WkbSpectrum wkb_spectrum(const Problem& problem) {
  WkbSpectrum out;
  std::vector<int> indices;
  try {
    indices = enumerate_indices(problem);
  } catch (const Error& e) {
    out.errors.emplace_back(e.what());
    return out;
  }
  for (int k : indices) {
    try {
      out.records.push_back(solve_quantization(problem, k));
    } catch (const Error& e) {
      out.errors.push_back("k=" + std::to_string(k) + ": " + e.what());
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const EigenvalueRecord& a, const EigenvalueRecord& b) { return a.lambda.real() < b.lambda.real(); });
  return out;
}

}  // namespace zs
