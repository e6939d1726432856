#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "zsspec/error.hpp"
#include "zsspec/stokes.hpp"
#include "zsspec/turning.hpp"

using namespace zs;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

TEST_CASE("emanation angles at unperturbed turning points") {
  for (const auto& spec : {test::tanh_spec(), test::well_spec()}) {
    const Problem p(spec);
    const TurningPointPair tp = find_turning_points(p, p.lambda0());
    const auto at_alpha = stokes_directions(p, p.lambda0(), tp.alpha);
    const auto at_beta = stokes_directions(p, p.lambda0(), tp.beta);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(at_alpha[j] - 2.0 * kPi * j / 3.0) < 1e-6);
      CHECK(std::abs(at_beta[j] - (kPi / 3.0 + 2.0 * kPi * j / 3.0)) < 1e-6);
    }
    for (int j = 1; j < 3; ++j) CHECK(std::abs(at_alpha[j] - at_alpha[j - 1] - 2.0 * kPi / 3.0) < 1e-6);
  }
}

TEST_CASE("angles move continuously with eps") {
  for (const auto& spec : {test::tanh_spec(), test::well_spec()}) {
    const Problem p0(spec);
    const Problem p1 = p0.with_eps(0.05);
    const TurningPointPair a = find_turning_points(p0, p0.lambda0());
    const TurningPointPair b = find_turning_points(p1, p1.lambda0());
    const auto d0 = stokes_directions(p0, p0.lambda0(), a.alpha);
    const auto d1 = stokes_directions(p1, p1.lambda0(), b.alpha);
    for (double t0 : d0) {
      double best = 10.0;
      for (double t1 : d1) best = std::min(best, angle_gap(t0, t1));
      CHECK(best < 0.2);
    }
  }
}

TEST_CASE("degenerate turning point is rejected") {
  const Problem p(test::well_spec());
  try {
    stokes_directions(p, 1.0, 0.0);
    FAIL("expected DegenerateTurningPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTurningPoint);
  }
}

TEST_CASE("unperturbed graph: real segment connects the turning points") {
  for (const auto& spec : {test::tanh_spec(), test::well_spec()}) {
    const Problem p(spec);
    const StokesGraph g = build_graph(p, p.lambda0());
    CHECK(g.errors.empty());
    REQUIRE(g.turning_points.size() == 2);
    REQUIRE(g.curves.size() == 6);
    CHECK(has_connecting_curve(g));
    const StokesCurve& first = g.curves.front();
    CHECK(first.origin_index == 0);
    CHECK(first.initial_angle == doctest::Approx(0.0));
    CHECK(first.termination == Termination::NearTurningPoint);
    CHECK(first.end_index == 1);
    for (const auto& c : g.curves) CHECK(c.max_level_error < 1e-6);
  }
}

TEST_CASE("upward curve from alpha climbs to the strip edge") {
  const Problem p(test::tanh_spec());
  const TurningPointPair tp = find_turning_points(p, 1.0);
  const StokesCurve c = trace_stokes_line(p, 1.0, tp.alpha, 2.0 * kPi / 3.0);
  CHECK(c.termination == Termination::StripBoundary);
  for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].imag() > c.points[i - 1].imag());
  CHECK(std::abs(c.points.back().imag()) > 0.99 * p.potential().strip_half_width);
}

TEST_CASE("graph of an even profile is symmetric under z -> -conj z") {
  const Problem p(test::well_spec());
  const StokesGraph g = build_graph(p, 1.5);
  REQUIRE(g.curves.size() == 6);
  for (const auto& c : g.curves) {
    const StokesCurve* mirror = nullptr;
    for (const auto& d : g.curves) {
      if (d.origin_index != c.origin_index && angle_gap(d.initial_angle, kPi - c.initial_angle) < 1e-9) mirror = &d;
    }
    REQUIRE(mirror != nullptr);
    REQUIRE(mirror->points.size() == c.points.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      worst = std::max(worst, std::abs(-std::conj(c.points[i]) - mirror->points[i]));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("perturbed graph keeps three curves per point and level fidelity") {
  for (const auto& spec : {test::tanh_spec(0.05), test::well_spec(0.05)}) {
    const Problem p(spec);
    const StokesGraph g = build_graph(p, p.lambda0());
    CHECK(g.curves.size() == 6);
    for (const auto& c : g.curves) {
      CHECK(c.max_level_error < 1e-6);
      CHECK(c.termination != Termination::StepFailure);
    }
  }
}

TEST_CASE("termination labels round-trip") {
  for (Termination t : {Termination::StripBoundary, Termination::MaxLength, Termination::NearTurningPoint,
                        Termination::StepFailure}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
}
