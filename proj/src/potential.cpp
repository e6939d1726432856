#include "zsspec/potential.hpp"

#include <algorithm>
#include <cmath>

#include "zsspec/error.hpp"

namespace zs {

namespace {

enum class TermKind { Const = 0, Tanh = 1, Gauss = 2, XGauss = 3 };

struct Term {
  int slot;  // 0 = A, 1 = B
  TermKind kind;
  double coeff;
  double rate;
};

// value and derivative of a single basis function
PotentialValue eval_term(TermKind kind, double rate, cplx z) {
  switch (kind) {
    case TermKind::Const:
      return {1.0, 0.0};
    case TermKind::Tanh: {
      const cplx t = std::tanh(rate * z);
      return {t, rate * (1.0 - t * t)};
    }
    case TermKind::Gauss: {
      const cplx g = std::exp(-rate * z * z);
      return {g, -2.0 * rate * z * g};
    }
    case TermKind::XGauss: {
      const cplx g = std::exp(-rate * z * z);
      return {z * g, g * (1.0 - 2.0 * rate * z * z)};
    }
  }
  return {0.0, 0.0};
}

std::vector<Term> decode_custom(const std::vector<double>& params) {
  if (params.size() % 4 != 0 || params.empty()) {
    throw Error(ErrorCode::InvalidSpec, "custom-sum params must be non-empty quadruples (slot, kind, coeff, rate)");
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < params.size(); i += 4) {
    const int slot = static_cast<int>(params[i]);
    const int kind = static_cast<int>(params[i + 1]);
    if (slot < 0 || slot > 1 || static_cast<double>(slot) != params[i]) {
      throw Error(ErrorCode::InvalidSpec, "custom-sum slot must be 0 (A) or 1 (B)");
    }
    if (kind < 0 || kind > 3 || static_cast<double>(kind) != params[i + 1]) {
      throw Error(ErrorCode::InvalidSpec, "custom-sum kind must be 0..3");
    }
    if (kind != 0 && !(params[i + 3] > 0.0)) {
      throw Error(ErrorCode::InvalidSpec, "custom-sum rate must be positive");
    }
    terms.push_back({slot, static_cast<TermKind>(kind), params[i + 2], params[i + 3]});
  }
  return terms;
}

void check_params(const PotentialSpec& spec) {
  switch (spec.family) {
    case Family::WellEven:
      if (spec.params.size() != 2 || !(spec.params[0] > spec.params[1]) || !(spec.params[1] > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "well-even needs params [a, b] with a > b > 0");
      }
      break;
    case Family::MonotoneOdd:
      if (spec.params.size() != 1 || !(spec.params[0] > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "monotone-odd needs params [a] with a > 0");
      }
      break;
    case Family::CustomSum:
      decode_custom(spec.params);
      break;
  }
  if (!(spec.strip_half_width > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "strip_half_width must be positive");
  }
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::WellEven: return "well-even";
    case Family::MonotoneOdd: return "monotone-odd";
    case Family::CustomSum: return "custom-sum-of-terms";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "well-even") return Family::WellEven;
  if (name == "monotone-odd") return Family::MonotoneOdd;
  if (name == "custom-sum-of-terms" || name == "custom-sum") return Family::CustomSum;
  throw Error(ErrorCode::InvalidSpec, "unknown potential family '" + name + "'");
}

std::string to_string(SymmetryClass tag) {
  switch (tag) {
    case SymmetryClass::AEvenBOdd: return "A-even-B-odd";
    case SymmetryClass::AOddBEven: return "A-odd-B-even";
    case SymmetryClass::None: return "none";
  }
  return "unknown";
}

std::string to_string(WellType type) {
  return type == WellType::SimpleWell ? "simple-well" : "monotonic";
}

double PotentialSpec::default_strip(Family family, const std::vector<double>& params) {
  switch (family) {
    case Family::WellEven: return 10.0;
    case Family::MonotoneOdd: return 0.5;
    case Family::CustomSum: {
      double max_rate = 0.0;
      for (const Term& t : decode_custom(params)) {
        if (t.kind == TermKind::Tanh) max_rate = std::max(max_rate, t.rate);
      }
      return max_rate > 0.0 ? 0.5 / max_rate : 10.0;
    }
  }
  return 10.0;
}

PotentialSpec PotentialSpec::well_even(double a, double b) {
  PotentialSpec spec{Family::WellEven, {a, b}, 10.0};
  check_params(spec);
  return spec;
}

PotentialSpec PotentialSpec::monotone_odd(double a) {
  PotentialSpec spec{Family::MonotoneOdd, {a}, 0.5};
  check_params(spec);
  return spec;
}

PotentialSpec PotentialSpec::custom(std::vector<double> params, double strip_half_width) {
  PotentialSpec spec{Family::CustomSum, std::move(params), strip_half_width};
  check_params(spec);
  return spec;
}

PotentialValue eval_potential_unchecked(const PotentialSpec& spec, cplx z, double eps) {
  const cplx ieps(0.0, eps);
  switch (spec.family) {
    case Family::WellEven: {
      const double a = spec.params[0];
      const double b = spec.params[1];
      const cplx g = std::exp(-z * z);
      const cplx A = a - b * g;
      const cplx dA = 2.0 * b * z * g;
      const cplx B = z * g;
      const cplx dB = g * (1.0 - 2.0 * z * z);
      return {A + ieps * B, dA + ieps * dB};
    }
    case Family::MonotoneOdd: {
      const double a = spec.params[0];
      const cplx t = std::tanh(z);
      const cplx g = std::exp(-z * z);
      return {a * t + ieps * g, a * (1.0 - t * t) - ieps * 2.0 * z * g};
    }
    case Family::CustomSum: {
      PotentialValue out{0.0, 0.0};
      const auto& p = spec.params;
      for (std::size_t i = 0; i + 3 < p.size(); i += 4) {
        const auto kind = static_cast<TermKind>(static_cast<int>(p[i + 1]));
        const PotentialValue term = eval_term(kind, p[i + 3], z);
        const cplx weight = p[i] == 0.0 ? cplx(p[i + 2]) : ieps * p[i + 2];
        out.value += weight * term.value;
        out.derivative += weight * term.derivative;
      }
      return out;
    }
  }
  return {0.0, 0.0};
}

PotentialValue eval_potential(const PotentialSpec& spec, cplx z, double eps) {
  if (std::abs(z.imag()) >= spec.strip_half_width) {
    throw Error(ErrorCode::OutOfStrip, "|Im z| = " + std::to_string(std::abs(z.imag())) +
                                           " exceeds strip half width " + std::to_string(spec.strip_half_width));
  }
  return eval_potential_unchecked(spec, z, eps);
}

SymmetryClass classify_symmetry(const PotentialSpec& spec, double cutoff) {
  check_params(spec);
  constexpr int kGrid = 101;
  constexpr double kTol = 1e-12;
  bool a_even = true, a_odd = true, b_even = true, b_odd = true;
  for (int i = 0; i < kGrid; ++i) {
    const double x = -cutoff + 2.0 * cutoff * i / (kGrid - 1);
    // eps = 1 isolates B in the imaginary part since A and B are real on the axis
    const cplx plus = eval_potential_unchecked(spec, x, 1.0).value;
    const cplx minus = eval_potential_unchecked(spec, -x, 1.0).value;
    const double a_scale = std::max(1.0, std::abs(plus.real()));
    const double b_scale = std::max(1.0, std::abs(plus.imag()));
    a_even = a_even && std::abs(plus.real() - minus.real()) <= kTol * a_scale;
    a_odd = a_odd && std::abs(plus.real() + minus.real()) <= kTol * a_scale;
    b_even = b_even && std::abs(plus.imag() - minus.imag()) <= kTol * b_scale;
    b_odd = b_odd && std::abs(plus.imag() + minus.imag()) <= kTol * b_scale;
  }
  if (a_even && b_odd) return SymmetryClass::AEvenBOdd;
  if (a_odd && b_even) return SymmetryClass::AOddBEven;
  return SymmetryClass::None;
}

std::vector<double> real_level_crossings(const PotentialSpec& spec, double level, double cutoff) {
  constexpr int kGrid = 4001;
  auto excess = [&](double x) { return std::abs(eval_potential_unchecked(spec, x, 0.0).value.real()) - level; };
  auto refine = [&](double outside, double inside) {
    // invariant: excess(outside) > 0 >= excess(inside)
    for (int it = 0; it < 200 && std::abs(outside - inside) > 0.0; ++it) {
      const double mid = 0.5 * (outside + inside);
      if (mid == outside || mid == inside) break;
      (excess(mid) > 0.0 ? outside : inside) = mid;
    }
    return inside;
  };

  std::vector<double> crossings;
  double x_prev = -cutoff;
  double g_prev = excess(x_prev);
  for (int i = 1; i < kGrid; ++i) {
    const double x = -cutoff + 2.0 * cutoff * i / (kGrid - 1);
    const double g = excess(x);
    const bool in_prev = g_prev <= 0.0;
    const bool in_now = g <= 0.0;
    if (in_prev != in_now) {
      crossings.push_back(in_now ? refine(x_prev, x) : refine(x, x_prev));
    }
    x_prev = x;
    g_prev = g;
  }
  return crossings;
}

A1Report validate_A1(const PotentialSpec& spec, double lambda0, double cutoff) {
  check_params(spec);
  if (!(lambda0 > 0.0) || !(cutoff > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "validate_A1 needs lambda0 > 0 and cutoff > 0");
  }
  const auto crossings = real_level_crossings(spec, lambda0, cutoff);
  if (crossings.size() < 2) {
    throw Error(ErrorCode::A1Violated,
                "found " + std::to_string(crossings.size()) + " crossings of |A| = " + std::to_string(lambda0),
                A1Reason::MissingCrossings);
  }
  if (crossings.size() > 2) {
    throw Error(ErrorCode::A1Violated, "found " + std::to_string(crossings.size()) + " crossings",
                A1Reason::ExtraCrossings);
  }

  A1Report report;
  report.alpha0 = crossings[0];
  report.beta0 = crossings[1];
  report.lambda0 = lambda0;
  const PotentialValue at_alpha = eval_potential_unchecked(spec, report.alpha0, 0.0);
  const PotentialValue at_beta = eval_potential_unchecked(spec, report.beta0, 0.0);
  report.slope_alpha = at_alpha.derivative.real();
  report.slope_beta = at_beta.derivative.real();
  constexpr double kSlopeTol = 1e-8;
  if (std::abs(report.slope_alpha) <= kSlopeTol || std::abs(report.slope_beta) <= kSlopeTol ||
      report.beta0 - report.alpha0 < 1e-6) {
    throw Error(ErrorCode::A1Violated, "degenerate slope at a crossing", A1Reason::ZeroSlope);
  }
  report.well_type =
      at_alpha.value.real() * at_beta.value.real() > 0.0 ? WellType::SimpleWell : WellType::Monotonic;

  const double left = std::abs(eval_potential_unchecked(spec, -cutoff, 0.0).value.real());
  const double right = std::abs(eval_potential_unchecked(spec, cutoff, 0.0).value.real());
  report.margin_at_infinity = std::min(left, right) - lambda0;
  if (!(report.margin_at_infinity > 0.0)) {
    throw Error(ErrorCode::A1Violated, "|A| at the cutoffs does not exceed lambda0", A1Reason::NoMarginAtInfinity);
  }
  return report;
}

}  // namespace zs
