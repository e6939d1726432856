#include "zsspec/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zsspec/error.hpp"
#include "zsspec/turning.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);
constexpr int kProjectEvery = 10;
constexpr double kNearTurningPoint = 1e-3;

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

class PhaseField {
 public:
  PhaseField(const Problem& problem, cplx lambda) : problem_(problem), lambda_sq_(lambda * lambda) {}

  cplx principal_root(cplx z) const {
    const cplx a = eval_potential_unchecked(problem_.potential(), z, problem_.eps()).value;
    return std::sqrt(a * a - lambda_sq_);
  }

  static cplx tangent(cplx w) { return kI * std::conj(w) / std::abs(w); }

  // The root whose Stokes tangent points along `heading`.
  cplx oriented_root(cplx z, cplx heading) const {
    const cplx s = principal_root(z);
    const cplx t = tangent(s);
    return (t.real() * heading.real() + t.imag() * heading.imag()) >= 0.0 ? s : -s;
  }

  cplx tangent_at(cplx z, cplx heading) const { return tangent(oriented_root(z, heading)); }

  // Simpson estimate of the phase increment along the chord a -> b.
  cplx increment(cplx a, cplx b, cplx heading) const {
    const cplx wa = oriented_root(a, heading);
    const cplx wm = oriented_root(0.5 * (a + b), heading);
    const cplx wb = oriented_root(b, heading);
    return (b - a) * (wa + 4.0 * wm + wb) / 6.0;
  }

 private:
  const Problem& problem_;
  cplx lambda_sq_;
};

}  // namespace

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::StripBoundary: return "strip-boundary";
    case Termination::MaxLength: return "max-length";
    case Termination::NearTurningPoint: return "near-turning-point";
    case Termination::StepFailure: return "step-failure";
  }
  return "unknown";
}

Termination termination_from_string(const std::string& name) {
  if (name == "strip-boundary") return Termination::StripBoundary;
  if (name == "max-length") return Termination::MaxLength;
  if (name == "near-turning-point") return Termination::NearTurningPoint;
  if (name == "step-failure") return Termination::StepFailure;
  throw Error(ErrorCode::ConfigError, "unknown termination '" + name + "'");
}

std::array<double, 3> stokes_directions(const Problem& problem, cplx lambda, cplx tp) {
  (void)lambda;
  const PotentialValue a = eval_potential(problem.potential(), tp, problem.eps());
  const cplx slope = 2.0 * a.value * a.derivative;
  if (std::abs(slope) <= 1e-8) {
    throw Error(ErrorCode::DegenerateTurningPoint, "f'(tp) vanishes at the turning point");
  }
  // sqrt(f'(tp)) (z - tp)^(3/2) is purely imaginary along these rays
  std::array<double, 3> angles{};
  for (int n = 0; n < 3; ++n) {
    double theta = (kPi + 2.0 * kPi * n - std::arg(slope)) / 3.0;
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    angles[n] = theta;
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

StokesCurve trace_stokes_line(const Problem& problem, cplx lambda, const std::vector<cplx>& turning_points,
                              int origin_index, double angle) {
  const auto& tol = problem.tol();
  const double strip = problem.potential().strip_half_width;
  const cplx tp = turning_points.at(origin_index);
  const PhaseField field(problem, lambda);

  StokesCurve curve;
  curve.origin_index = origin_index;
  curve.initial_angle = angle;
  curve.points.push_back(tp);

  // first leg along the local model; the phase integral uses t = tp + v^2 (z1 - tp), which
  // removes the square-root behaviour at the turning point
  const cplx heading0 = std::polar(1.0, angle);
  const cplx delta = tol.stokes_start * heading0;
  cplx z = tp + delta;
  const cplx w_end = field.oriented_root(z, heading0);
  static const GaussRule rule = gauss_legendre(24);
  cplx phase = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.nodes[i];
    const cplx s = field.principal_root(tp + v * v * delta);
    const cplx reference = v * w_end;  // local model: w ~ sqrt(t - tp)
    const cplx w = std::abs(s - reference) <= std::abs(s + reference) ? s : -s;
    phase += rule.weights[i] * w * 2.0 * v * delta;
  }
  cplx heading = field.tangent(w_end);
  double length = tol.stokes_start;

  auto project = [&]() -> bool {
    const double before = std::abs(phase.real());
    const double floor = 1e-13 * std::max(1.0, std::abs(phase));
    for (int it = 0; it < 3 && std::abs(phase.real()) > floor; ++it) {
      const cplx w = field.oriented_root(z, heading);
      const cplx dz = -phase.real() * std::conj(w) / std::norm(w);
      const cplx next = z + dz;
      phase += field.increment(z, next, heading);
      z = next;
    }
    return std::abs(phase.real()) <= std::max(before, 10.0 * floor);
  };

  auto record = [&]() {
    curve.points.push_back(z);
    // for entire potentials the phase grows like exp(Im z^2) toward the strip edge, where absolute
    // accuracy is capped by roundoff; the error is therefore measured relative to |phase| beyond 1
    curve.max_level_error =
        std::max(curve.max_level_error, std::abs(phase.real()) / std::max(1.0, std::abs(phase)));
  };

  if (!project()) {
    curve.termination = Termination::StepFailure;
    curve.arc_length = length;
    return curve;
  }
  heading = field.tangent_at(z, heading);
  record();

  const double ds = tol.stokes_step;
  for (int step = 1;; ++step) {
    for (std::size_t j = 0; j < turning_points.size(); ++j) {
      if (static_cast<int>(j) == origin_index && length < 2.0 * tol.stokes_start) continue;
      if (std::abs(z - turning_points[j]) < kNearTurningPoint) {
        curve.termination = Termination::NearTurningPoint;
        curve.end_index = static_cast<int>(j);
        curve.arc_length = length;
        return curve;
      }
    }
    if (length >= tol.stokes_max_length) {
      curve.termination = Termination::MaxLength;
      break;
    }
    const cplx k1 = field.tangent_at(z, heading);
    const cplx k2 = field.tangent_at(z + 0.5 * ds * k1, k1);
    const cplx k3 = field.tangent_at(z + 0.5 * ds * k2, k2);
    const cplx k4 = field.tangent_at(z + ds * k3, k3);
    const cplx next = z + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) {
      curve.termination = Termination::StepFailure;
      break;
    }
    if (std::abs(next.imag()) >= strip) {
      curve.termination = Termination::StripBoundary;
      break;
    }
    phase += field.increment(z, next, k1);
    z = next;
    heading = field.tangent_at(z, k4);
    length += ds;
    if (step % kProjectEvery == 0) {
      if (!project()) {
        curve.termination = Termination::StepFailure;
        break;
      }
      if (std::abs(z.imag()) >= strip) {
        curve.termination = Termination::StripBoundary;
        break;
      }
      heading = field.tangent_at(z, heading);
    }
    record();
  }
  curve.arc_length = length;
  return curve;
}

StokesCurve trace_stokes_line(const Problem& problem, cplx lambda, cplx tp, double angle) {
  std::vector<cplx> tps{tp};
  try {
    const TurningPointPair pair = find_turning_points(problem, lambda);
    tps = {pair.alpha, pair.beta};
  } catch (const Error&) {
  }
  auto it = std::min_element(tps.begin(), tps.end(),
                             [&](cplx a, cplx b) { return std::abs(a - tp) < std::abs(b - tp); });
  if (std::abs(*it - tp) > 1e-9) {
    tps.push_back(tp);
    it = tps.end() - 1;
  }
  *it = tp;
  return trace_stokes_line(problem, lambda, tps, static_cast<int>(it - tps.begin()), angle);
}

StokesGraph build_graph(const Problem& problem, cplx lambda) {
  StokesGraph graph;
  const TurningPointPair pair = find_turning_points(problem, lambda);
  graph.turning_points = {pair.alpha, pair.beta};
  for (int i = 0; i < 2; ++i) {
    try {
      for (double angle : stokes_directions(problem, lambda, graph.turning_points[i])) {
        graph.curves.push_back(trace_stokes_line(problem, lambda, graph.turning_points, i, angle));
      }
    } catch (const Error& e) {
      graph.errors.emplace_back(e.what());
    }
  }
  return graph;
}

bool has_connecting_curve(const StokesGraph& graph) {
  return std::any_of(graph.curves.begin(), graph.curves.end(), [](const StokesCurve& c) {
    return c.termination == Termination::NearTurningPoint && c.end_index >= 0 && c.end_index != c.origin_index;
  });
}

}  // namespace zs
