#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "zsspec/action.hpp"
#include "zsspec/direct.hpp"
#include "zsspec/error.hpp"

using namespace zs;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

// |sin| of the angle between two complex 2-vectors
double misalignment(const Vec2& a, const Vec2& b) {
  const double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  const double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
  return std::abs(a[0] * b[1] - a[1] * b[0]) / (na * nb);
}

double total_log_modulus(const WronskianSample& w) { return std::log(std::abs(w.w_value)) + w.log_scale; }

// Far to the left of the well-even profile exp(-x^2) is below 1e-15, so A = 2 to working
// precision and the system has constant coefficients.
ProblemSpec far_field_spec() {
  ProblemSpec s = test::well_spec();
  s.cutoff = 12.0;
  return s;
}

}  // namespace

TEST_CASE("constant-coefficient seed is an eigenvector of the symbol") {
  const Problem p(far_field_spec());
  const cplx lambda = 1.0;
  const double kappa = std::sqrt(3.0);
  const auto m = system_matrix(p, lambda, -11.0);
  CHECK(std::abs(m[1] - 2.0) < 1e-15);
  for (Direction dir : {Direction::FromLeft, Direction::FromRight}) {
    const BoundaryData seed = boundary_seed(p, lambda, dir, dir == Direction::FromLeft ? -11.0 : 11.0);
    const Vec2& v = seed.seed_vector;
    CHECK(std::sqrt(std::norm(v[0]) + std::norm(v[1])) == doctest::Approx(1.0).epsilon(1e-14));
    const double rate = dir == Direction::FromLeft ? kappa : -kappa;
    const Vec2 mv{m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    CHECK(std::abs(mv[0] - rate * v[0]) < 1e-14);
    CHECK(std::abs(mv[1] - rate * v[1]) < 1e-14);
  }
}

TEST_CASE("constant-coefficient integration matches the matrix exponential") {
  const Problem p(far_field_spec());
  const cplx lambda = 1.0;
  const double kappa = std::sqrt(3.0);
  const Vec2 start{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const double s = 5.0 / p.h();
  const ScaledVector out = integrate(p, lambda, ScaledVector{start, 0.0}, -11.0, -6.0);

  // exp(M s) = cosh(kappa s) I + sinh(kappa s) M / kappa; factor out exp(kappa s) / 2
  const std::array<cplx, 4> m{-kI * lambda, 2.0, 2.0, kI * lambda};
  const double decay = std::exp(-2.0 * kappa * s);
  const Vec2 scaled{(1.0 + decay) * start[0] + (1.0 - decay) * (m[0] * start[0] + m[1] * start[1]) / kappa,
                    (1.0 + decay) * start[1] + (1.0 - decay) * (m[2] * start[0] + m[3] * start[1]) / kappa};
  const double log_exact = kappa * s - std::log(2.0) + std::log(std::sqrt(std::norm(scaled[0]) + std::norm(scaled[1])));
  CHECK(misalignment(out.vector, scaled) < 1e-8);
  CHECK(std::abs(out.log_scale - log_exact) < 1e-8 * log_exact);
}

TEST_CASE("zero-length integration is the identity") {
  const Problem p(test::well_spec());
  const BoundaryData seed = boundary_seed(p, 1.5, Direction::FromLeft);
  const ScaledVector out = integrate(p, 1.5, seed, seed.x_cut);
  CHECK(out.vector == seed.seed_vector);
  CHECK(out.log_scale == seed.log_scale);
}

TEST_CASE("integration is reversible across the well") {
  const Problem p(test::well_spec(0.05));
  const Vec2 start{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const cplx lambda(1.45, 0.01);
  const ScaledVector there = integrate(p, lambda, ScaledVector{start, 0.0}, -0.5, 0.5);
  const ScaledVector back = integrate(p, lambda, there, 0.5, -0.5);
  CHECK(misalignment(back.vector, start) < 1e-8);
  CHECK(std::abs(back.log_scale) < 1e-8);
}

TEST_CASE("seed inside the well is rejected") {
  const Problem p(test::well_spec());
  try {
    boundary_seed(p, 1.5, Direction::FromLeft, p.a1().alpha0);
    FAIL("expected InsideWell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsideWell);
  }
}

TEST_CASE("left and right seeds are mirror images for even A") {
  // x -> -x maps solutions (u1, u2) to (u2, -u1) when A is even and eps = 0
  const Problem p(test::well_spec());
  for (double lambda : {1.35, 1.5, 1.62}) {
    const Vec2 l = boundary_seed(p, lambda, Direction::FromLeft, -3.0).seed_vector;
    const Vec2 r = boundary_seed(p, lambda, Direction::FromRight, 3.0).seed_vector;
    CHECK(misalignment(r, Vec2{l[1], -l[0]}) < 1e-14);
  }
}

TEST_CASE("Wronskian size in gaps and at eigenvalues") {
  const Problem p(test::well_spec());
  CHECK(std::abs(wronskian(p, 1.05).w_value) > 1e-3);
  const auto roots = direct_spectrum_real(p);
  REQUIRE(!roots.empty());
  for (const auto& r : roots) CHECK(std::abs(wronskian(p, r.lambda).w_value) < 1e-2);
}

TEST_CASE("Wronskian modulus is conjugation symmetric under parity pairing") {
  for (const auto& spec : {test::well_spec(0.05), test::tanh_spec(0.05)}) {
    const Problem p(spec);
    for (cplx lambda : {cplx(p.lambda0() + 0.03, 0.02), cplx(p.lambda0() - 0.1, -0.05)}) {
      const double a = total_log_modulus(wronskian(p, lambda));
      const double b = total_log_modulus(wronskian(p, std::conj(lambda)));
      CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
    }
  }
}

TEST_CASE("real scan agrees with the quantization count and spacing") {
  for (const auto& spec : {test::well_spec(), test::tanh_spec()}) {
    const Problem p(spec);
    const auto roots = direct_spectrum_real(p);
    CHECK(roots.size() == wkb_spectrum(p).records.size());
    for (std::size_t i = 1; i < roots.size(); ++i) {
      const double gap = roots[i].lambda.real() - roots[i - 1].lambda.real();
      CHECK(gap > 0.0);
      const double mid = 0.5 * (roots[i].lambda.real() + roots[i - 1].lambda.real());
      const double predicted = kPi * p.h() / action_derivative(p, mid).real();
      CHECK(std::abs(gap - predicted) / predicted < 0.1);
    }
  }
}

TEST_CASE("tanh eigenvalues are known in closed form") {
  // A = a tanh x has bound states at lambda_n = sqrt(a^2 - (a - n h)^2)
  const Problem p(test::tanh_spec(0.0, 0.05));
  const auto roots = direct_spectrum_real(p);
  REQUIRE(!roots.empty());
  for (const auto& r : roots) {
    const double n = (2.0 - std::sqrt(4.0 - std::norm(r.lambda))) / p.h();
    CHECK(std::abs(n - std::round(n)) < 1e-6);
    const double exact = std::sqrt(4.0 - std::pow(2.0 - std::round(n) * p.h(), 2));
    CHECK(std::abs(r.lambda.real() - exact) < 1e-8);
  }
}

TEST_CASE("winding numbers") {
  const Problem p(test::well_spec());
  const auto roots = direct_spectrum_real(p);
  REQUIRE(roots.size() >= 2);
  const double gap_mid = 0.5 * (roots[0].lambda.real() + roots[1].lambda.real());
  const double half_gap = 0.25 * (roots[1].lambda.real() - roots[0].lambda.real());
  CHECK(count_zeros(p, {cplx(gap_mid - half_gap, -0.01), cplx(gap_mid + half_gap, 0.01)}).winding == 0);
  const double r0 = roots[0].lambda.real();
  CHECK(count_zeros(p, {cplx(r0 - half_gap, -0.01), cplx(r0 + half_gap, 0.01)}).winding == 1);
  const ZeroCount whole = count_zeros(p, window_rectangle(p));
  CHECK(whole.winding == static_cast<int>(roots.size()));
  CHECK(whole.samples_on_boundary >= 128);
}

TEST_CASE("complex search at eps = 0 reproduces the real scan") {
  const Problem p(test::tanh_spec());
  const auto real_roots = direct_spectrum_real(p);
  const ComplexSpectrum complex = direct_spectrum_complex(p);
  CHECK(complex.complete);
  REQUIRE(complex.records.size() == real_roots.size());
  for (std::size_t i = 0; i < real_roots.size(); ++i) {
    CHECK(std::abs(complex.records[i].lambda - real_roots[i].lambda) < 1e-10);
    CHECK(std::abs(complex.records[i].lambda.imag()) < 1e-10);
  }
}

TEST_CASE("eigenvalues do not depend on the matching point or the cutoffs") {
  const ProblemSpec base = test::well_spec();
  const auto ref = direct_spectrum_real(Problem(base));
  auto compare = [&](const ProblemSpec& spec) {
    const auto moved = direct_spectrum_real(Problem(spec));
    REQUIRE(moved.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(moved[i].lambda - ref[i].lambda) < 1e-9);
  };
  for (double shift : {-0.2, 0.2}) {
    ProblemSpec s = base;
    s.matching_shift = shift;
    compare(s);
  }
  ProblemSpec wide = base;
  wide.cutoff_scale = 1.25;
  compare(wide);
}

TEST_CASE("real scan requires a parity pairing when perturbed") {
  const Problem p(test::control_spec(0.05));
  try {
    direct_spectrum_real(p);
    FAIL("expected SymmetryRequired");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SymmetryRequired);
  }
}
