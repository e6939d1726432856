#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "zsspec/action.hpp"
#include "zsspec/error.hpp"

using namespace zs;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference for A = 2 tanh x, lambda = 1, frozen from a 1e6-node trapezoid rule on the
// cosine-substituted integrand (agrees with pi (2 - sqrt 3) to 6e-16).
constexpr double kTanhGolden = 0.8417872144769326;

double tanh_action_trapezoid(double lambda, int n) {
  const double tstar = std::atanh(lambda / 2.0);
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double phi = kPi * j / n;
    const double t = -tstar * std::cos(phi);
    const double th = std::tanh(t);
    const double f = std::sqrt(std::max(0.0, lambda * lambda - 4.0 * th * th)) * tstar * std::sin(phi);
    sum += (j == 0 || j == n) ? 0.5 * f : f;
  }
  return sum * kPi / n;
}

}  // namespace

TEST_CASE("tanh action against the brute-force oracle") {
  const Problem p(test::tanh_spec());
  const ActionValue a = action_integral(p, 1.0);
  CHECK(std::abs(tanh_action_trapezoid(1.0, 1000000) - kTanhGolden) < 1e-13);
  CHECK(std::abs(a.value - kTanhGolden) < 1e-12);
  CHECK(a.quad_error_estimate < 1e-10 * std::max(1.0, std::abs(a.value)));
}

TEST_CASE("derivative matches central differences of the oracle") {
  const Problem p(test::tanh_spec());
  const double d = 1e-6;
  const double fd = (tanh_action_trapezoid(1.0 + d, 200000) - tanh_action_trapezoid(1.0 - d, 200000)) / (2 * d);
  const cplx exact = action_derivative(p, 1.0);
  CHECK(exact.real() > 0.0);
  CHECK(std::abs(exact.imag()) < 1e-10);
  CHECK(std::abs(exact - fd) / std::abs(exact) < 1e-6);
}

TEST_CASE("derivative matches central differences at random window points") {
  std::mt19937 rng(11);
  for (const auto& spec : {test::well_spec(0.05), test::tanh_spec(0.05)}) {
    const Problem p(spec);
    std::uniform_real_distribution<double> re(-0.8 * p.delta(), 0.8 * p.delta()), im(-0.05, 0.05);
    for (int i = 0; i < 10; ++i) {
      const cplx lambda = p.lambda0() + cplx(re(rng), im(rng));
      const double d = 1e-6;
      const cplx fd = (action_integral(p, lambda + d).value - action_integral(p, lambda - d).value) / (2 * d);
      const cplx exact = action_derivative(p, lambda);
      CHECK(std::abs(exact - fd) / std::abs(exact) < 1e-6);
    }
  }
}

TEST_CASE("action vanishes as the turning points merge") {
  ProblemSpec s = test::well_spec();
  s.lambda0 = 1.1;
  s.delta = 0.09;
  const Problem p(s);
  const double small = action_integral(p, 1.0001).value.real();
  const double smaller = action_integral(p, 1.00001).value.real();
  CHECK(small > 0.0);
  CHECK(small < 1e-3);
  CHECK(smaller < 0.2 * small);
  try {
    action_integral(p, 1.0);
    FAIL("expected DegenerateSegment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSegment);
  }
}

TEST_CASE("real, positive and increasing on the unperturbed window") {
  for (const auto& spec : {test::well_spec(), test::tanh_spec()}) {
    const Problem p(spec);
    double previous = 0.0;
    for (double lambda = p.lambda0() - p.delta(); lambda <= p.lambda0() + p.delta(); lambda += 0.01) {
      const ActionValue a = action_integral(p, lambda);
      CHECK(std::abs(a.value.imag()) < 1e-10);
      CHECK(std::abs(a.dvalue_dlambda.imag()) < 1e-10);
      CHECK(a.value.real() > previous);
      previous = a.value.real();
    }
    CHECK(action_derivative(p, p.lambda0()).real() > 0.0);
  }
}

TEST_CASE("doubling quadrature nodes keeps the sign and the value") {
  for (const auto& spec : {test::well_spec(), test::tanh_spec(0.05)}) {
    ProblemSpec doubled = spec;
    doubled.tol.quad_min_nodes *= 2;
    const Problem p(spec), q(doubled);
    for (double offset : {-0.15, 0.0, 0.12}) {
      const cplx a = action_integral(p, p.lambda0() + offset).value;
      const cplx b = action_integral(q, q.lambda0() + offset).value;
      CHECK((a.real() > 0) == (b.real() > 0));
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("conjugation symmetry of the action") {
  const Problem sym(test::well_spec(0.05));
  CHECK(check_schwarz_symmetry(sym, 1.5) < 1e-10);
  CHECK(check_schwarz_symmetry(sym, cplx(1.5, 0.02)) < 1e-10);
  const Problem sym2(test::tanh_spec(0.05));
  CHECK(check_schwarz_symmetry(sym2, cplx(1.1, -0.04)) < 1e-10);

  const Problem control(test::control_spec(0.05));
  CHECK(schwarz_discrepancy(control, cplx(1.5, 0.02)) > 1e-4);
  try {
    check_schwarz_symmetry(control, cplx(1.5, 0.02));
    FAIL("expected SymmetryRequired");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SymmetryRequired);
  }
}
