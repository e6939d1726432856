#pragma once

#include <complex>
#include <string>
#include <vector>

namespace zs {

using cplx = std::complex<double>;

enum class Family { WellEven, MonotoneOdd, CustomSum };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Analytic potential pair (A, B).
///
/// Built-in families:
///   well-even     params [a, b]: A(x) = a - b exp(-x^2),  B(x) = x exp(-x^2)
///   monotone-odd  params [a]:    A(x) = a tanh(x),         B(x) = exp(-x^2)
///   custom-sum    params are quadruples (slot, kind, coeff, rate) with slot 0 = A,
///                 1 = B and kind 0 = const, 1 = tanh(rate x), 2 = exp(-rate x^2),
///                 3 = x exp(-rate x^2). Each term contributes coeff * kind(x).
struct PotentialSpec {
  Family family = Family::WellEven;
  std::vector<double> params;
  double strip_half_width = 10.0;

  static PotentialSpec well_even(double a = 2.0, double b = 1.0);
  static PotentialSpec monotone_odd(double a = 2.0);
  static PotentialSpec custom(std::vector<double> params, double strip_half_width);

  /// Default strip: 0.5 / (largest tanh rate) when tanh terms are present, else 10.
  static double default_strip(Family family, const std::vector<double>& params);
};

/// Value and z-derivative of A(z) + i eps B(z).
struct PotentialValue {
  cplx value;
  cplx derivative;
};

PotentialValue eval_potential(const PotentialSpec& spec, cplx z, double eps);

/// Same as eval_potential without the strip check; callers guarantee z is inside.
PotentialValue eval_potential_unchecked(const PotentialSpec& spec, cplx z, double eps);

enum class SymmetryClass { AEvenBOdd, AOddBEven, None };

std::string to_string(SymmetryClass tag);

SymmetryClass classify_symmetry(const PotentialSpec& spec, double cutoff = 8.0);

enum class WellType { SimpleWell, Monotonic };

std::string to_string(WellType type);

struct A1Report {
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double lambda0 = 0.0;
  double slope_alpha = 0.0;
  double slope_beta = 0.0;
  WellType well_type = WellType::SimpleWell;
  double margin_at_infinity = 0.0;
};

/// Checks the two-crossing well structure of |A| at level lambda0 on [-cutoff, cutoff].
/// The liminf condition at infinity is checked at the cutoffs only.
A1Report validate_A1(const PotentialSpec& spec, double lambda0, double cutoff);

/// Sign changes of |A(x)| - level on [-cutoff, cutoff], refined by bisection.
/// A grid point where |A| touches the level from above counts as two coincident crossings.
std::vector<double> real_level_crossings(const PotentialSpec& spec, double level, double cutoff);

}  // namespace zs
