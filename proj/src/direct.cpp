#include "zsspec/direct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zsspec/action.hpp"
#include "zsspec/error.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

double norm2(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

Vec2 apply(const std::array<cplx, 4>& m, const Vec2& v, double inv_h) {
  return {inv_h * (m[0] * v[0] + m[1] * v[1]), inv_h * (m[2] * v[0] + m[3] * v[1])};
}

Vec2 axpy(const Vec2& y, double dx, std::initializer_list<std::pair<double, const Vec2*>> terms) {
  Vec2 out = y;
  for (const auto& [c, k] : terms) {
    out[0] += dx * c * (*k)[0];
    out[1] += dx * c * (*k)[1];
  }
  return out;
}

// Phase-aligned real value of W relative to a reference log scale.
double aligned(const WronskianSample& s, double phase, double log_ref) {
  return (s.w_value * std::exp(cplx(s.log_scale - log_ref, -phase))).real();
}

}  // namespace

std::array<cplx, 4> system_matrix(const Problem& problem, cplx lambda, double x) {
  const cplx a = eval_potential_unchecked(problem.potential(), x, problem.eps()).value;
  return {-kI * lambda, a, a, kI * lambda};
}

BoundaryData boundary_seed(const Problem& problem, cplx lambda, Direction direction, double x_cut) {
  const cplx a = eval_potential_unchecked(problem.potential(), x_cut, problem.eps()).value;
  const cplx kappa = std::sqrt(a * a - lambda * lambda);
  if (!(kappa.real() > 1e-8 * std::max(1.0, std::abs(lambda)))) {
    throw Error(ErrorCode::InsideWell, "no decay margin at x_cut = " + std::to_string(x_cut));
  }
  // H^2 on the branch where kappa = (A - lambda) H^2 has positive real part
  const cplx h_sq = kappa / (a - lambda);
  Vec2 v;
  if (direction == Direction::FromLeft) {
    v = {1.0 - kI * h_sq, h_sq - kI};
  } else {
    v = {1.0 + kI * h_sq, -kI - h_sq};
  }
  const double n = norm2(v);
  return {x_cut, direction, {v[0] / n, v[1] / n}, std::log(n)};
}

BoundaryData boundary_seed(const Problem& problem, cplx lambda, Direction direction) {
  return boundary_seed(problem, lambda, direction,
                       direction == Direction::FromLeft ? problem.x_left() : problem.x_right());
}

ScaledVector integrate(const Problem& problem, cplx lambda, const ScaledVector& start, double x_start,
                       double x_target) {
  ScaledVector state = start;
  if (x_target == x_start) return state;

  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const auto& tol = problem.tol();
  const double inv_h = 1.0 / problem.h();
  const double dir = x_target > x_start ? 1.0 : -1.0;
  const double max_step = problem.h() / 4.0;
  auto rhs = [&](double x, const Vec2& y) { return apply(system_matrix(problem, lambda, x), y, inv_h); };

  double x = x_start;
  double step = max_step / 4.0;
  Vec2 k1 = rhs(x, state.vector);
  while (dir * (x_target - x) > 0.0) {
    step = std::min(step, max_step);
    bool last = false;
    if (step >= dir * (x_target - x)) {
      step = dir * (x_target - x);
      last = true;
    }
    if (step < tol.ode_min_step && !last) {
      throw Error(ErrorCode::StepUnderflow, "step size fell below " + std::to_string(tol.ode_min_step));
    }
    const double dx = dir * step;
    const Vec2& y = state.vector;
    const Vec2 k2 = rhs(x + c2 * dx, axpy(y, dx, {{a21, &k1}}));
    const Vec2 k3 = rhs(x + c3 * dx, axpy(y, dx, {{a31, &k1}, {a32, &k2}}));
    const Vec2 k4 = rhs(x + c4 * dx, axpy(y, dx, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec2 k5 = rhs(x + c5 * dx, axpy(y, dx, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec2 k6 = rhs(x + dx, axpy(y, dx, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec2 y_new = axpy(y, dx, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec2 k7 = rhs(x + dx, y_new);
    const Vec2 err_vec = axpy(Vec2{0.0, 0.0}, dx, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double scale = tol.ode_abs + tol.ode_rel * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += std::norm(err_vec[i]) / (scale * scale);
    }
    err = std::sqrt(err / 2.0);

    if (err <= 1.0) {
      x = last ? x_target : x + dx;
      const double n = norm2(y_new);
      state.vector = {y_new[0] / n, y_new[1] / n};
      state.log_scale += std::log(n);
      k1 = {k7[0] / n, k7[1] / n};  // FSAL; the system is linear
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    step *= err <= 1.0 ? factor : std::min(factor, 1.0);
  }
  return state;
}

ScaledVector integrate(const Problem& problem, cplx lambda, const BoundaryData& data, double x_target) {
  return integrate(problem, lambda, ScaledVector{data.seed_vector, data.log_scale}, data.x_cut, x_target);
}

WronskianSample wronskian(const Problem& problem, cplx lambda) {
  const double xm = problem.x_match();
  const ScaledVector left = integrate(problem, lambda, boundary_seed(problem, lambda, Direction::FromLeft), xm);
  const ScaledVector right = integrate(problem, lambda, boundary_seed(problem, lambda, Direction::FromRight), xm);
  const cplx det = left.vector[0] * right.vector[1] - left.vector[1] * right.vector[0];
  return {lambda, det, left.log_scale + right.log_scale};
}

std::vector<EigenvalueRecord> direct_spectrum_real(const Problem& problem) {
  if (problem.eps() != 0.0 && problem.symmetry() == SymmetryClass::None) {
    throw Error(ErrorCode::SymmetryRequired, "real scan needs eps = 0 or a parity-symmetric pair");
  }
  const auto& tol = problem.tol();
  const double h = problem.h();
  const double lo = problem.lambda0() - problem.delta();
  const double hi = problem.lambda0() + problem.delta();

  const double slope = action_integral(problem.with_eps(0.0), problem.lambda0()).dvalue_dlambda.real();
  const double target_step = std::min(h / 10.0, kPi * h / (8.0 * slope));
  const int intervals = static_cast<int>(std::ceil((hi - lo) / target_step));

  std::vector<WronskianSample> samples(intervals + 1);
  for (int i = 0; i <= intervals; ++i) samples[i] = wronskian(problem, lo + (hi - lo) * i / intervals);

  // phase[i] is arg W_i up to a multiple of pi, tracked continuously; sign flips mark zeros
  std::vector<double> phase(intervals + 1);
  phase[0] = std::arg(samples[0].w_value);
  std::vector<int> brackets;
  for (int i = 1; i <= intervals; ++i) {
    const double delta = std::arg(samples[i].w_value / samples[i - 1].w_value);
    double drift = delta;
    if (std::abs(delta) > 0.5 * kPi) {
      drift = delta - std::copysign(kPi, delta);
      brackets.push_back(i - 1);
    }
    if (std::abs(drift) > 0.25 * kPi) {
      throw Error(ErrorCode::PhaseTrackingLost, "phase drift " + std::to_string(drift) + " rad at lambda = " +
                                                    std::to_string(samples[i].lambda.real()));
    }
    phase[i] = phase[i - 1] + drift;
  }

  const Branch branch = select_branch(problem.a1());
  std::vector<EigenvalueRecord> out;
  for (int i : brackets) {
    const double ph = phase[i];
    const double log_ref = samples[i].log_scale;
    auto f = [&](double lam) { return aligned(wronskian(problem, lam), ph, log_ref); };
    double a = samples[i].lambda.real();
    double b = samples[i + 1].lambda.real();
    double fa = aligned(samples[i], ph, log_ref);
    double fb = aligned(samples[i + 1], ph, log_ref);
    // Illinois secant with a bisection every third step
    int side = 0;
    for (int it = 0; it < 200 && b - a > tol.bracket; ++it) {
      double c = (it % 3 == 2 || fa == fb) ? 0.5 * (a + b) : (a * fb - b * fa) / (fb - fa);
      if (!(c > a && c < b)) c = 0.5 * (a + b);
      const double fc = f(c);
      if (fc == 0.0) {
        a = b = c;
        break;
      }
      if ((fc > 0.0) == (fa > 0.0)) {
        a = c;
        fa = fc;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        b = c;
        fb = fc;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }
    EigenvalueRecord rec;
    rec.lambda = 0.5 * (a + b);
    rec.k = static_cast<int>(out.size());
    rec.branch = branch;
    rec.method = Method::Direct;
    rec.residual = std::abs(wronskian(problem, rec.lambda).w_value);
    rec.h = h;
    rec.eps = problem.eps();
    out.push_back(rec);
  }
  return out;
}

Rectangle window_rectangle(const Problem& problem) {
  const double hh = problem.imag_half_height();
  return {cplx(problem.lambda0() - problem.delta(), -hh), cplx(problem.lambda0() + problem.delta(), hh)};
}

ZeroCount count_zeros(const Problem& problem, Rectangle rectangle) {
  const auto& tol = problem.tol();
  for (int attempt = 0; attempt <= 3; ++attempt) {
    if (attempt > 0) {
      const cplx center = 0.5 * (rectangle.lower_left + rectangle.upper_right);
      rectangle.lower_left = center + 1.01 * (rectangle.lower_left - center);
      rectangle.upper_right = center + 1.01 * (rectangle.upper_right - center);
    }
    const cplx ll = rectangle.lower_left;
    const cplx ur = rectangle.upper_right;
    const std::array<cplx, 5> corners = {ll, cplx(ur.real(), ll.imag()), ur, cplx(ll.real(), ur.imag()), ll};
    // boundary parameter s in [0, 4): edge index plus fraction
    auto point = [&](double s) {
      const int e = std::min(3, static_cast<int>(s));
      return corners[e] + (s - e) * (corners[e + 1] - corners[e]);
    };

    struct Node {
      double s;
      cplx w;
    };
    constexpr int kInitialPerEdge = 32;
    std::vector<Node> nodes;
    bool hit_zero = false;
    for (int i = 0; i <= 4 * kInitialPerEdge && !hit_zero; ++i) {
      const double s = static_cast<double>(i) / kInitialPerEdge;
      const cplx w = i == 4 * kInitialPerEdge ? nodes.front().w : wronskian(problem, point(s)).w_value;
      hit_zero = std::abs(w) <= tol.boundary_zero;
      nodes.push_back({s, w});
    }
    if (hit_zero) continue;

    bool refined = true;
    while (refined && !hit_zero) {
      refined = false;
      std::vector<Node> next;
      next.reserve(nodes.size() * 2);
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        next.push_back(nodes[i]);
        if (std::abs(std::arg(nodes[i + 1].w / nodes[i].w)) >= 0.5 * kPi) {
          const double s = 0.5 * (nodes[i].s + nodes[i + 1].s);
          const cplx w = wronskian(problem, point(s)).w_value;
          if (std::abs(w) <= tol.boundary_zero) {
            hit_zero = true;
            break;
          }
          next.push_back({s, w});
          refined = true;
        }
      }
      if (hit_zero) break;
      next.push_back(nodes.back());
      nodes = std::move(next);
      if (static_cast<int>(nodes.size()) > tol.winding_max_samples) {
        throw Error(ErrorCode::PhaseResolution, "boundary refinement cap reached");
      }
    }
    if (hit_zero) continue;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += std::arg(nodes[i + 1].w / nodes[i].w);
    const double turns = total / (2.0 * kPi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 0.1) {
      throw Error(ErrorCode::PhaseResolution, "winding " + std::to_string(turns) + " is not near an integer");
    }
    return {rectangle, static_cast<int>(rounded), static_cast<int>(nodes.size()) - 1};
  }
  throw Error(ErrorCode::BoundaryZero, "W vanishes on the rectangle boundary after 3 inflations");
}

cplx newton_on_wronskian(const Problem& problem, cplx seed) {
  const auto& tol = problem.tol();
  const double d = tol.newton_fd_step;
  cplx lambda = seed;
  for (int it = 0; it < tol.newton_cap; ++it) {
    const WronskianSample w0 = wronskian(problem, lambda);
    const WronskianSample wp = wronskian(problem, lambda + d);
    const WronskianSample wm = wronskian(problem, lambda - d);
    // W(lambda +- d) / W(lambda), so the exponential scale cancels
    const cplx rp = wp.w_value / w0.w_value * std::exp(wp.log_scale - w0.log_scale);
    const cplx rm = wm.w_value / w0.w_value * std::exp(wm.log_scale - w0.log_scale);
    const cplx step = 2.0 * d / (rp - rm);
    lambda -= step;
    if (std::abs(lambda - problem.lambda0()) > 2.0 * problem.delta()) {
      throw Error(ErrorCode::LeftWindow, "Wronskian Newton left the window");
    }
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(lambda))) return lambda;
  }
  throw Error(ErrorCode::NoConvergence, "Wronskian Newton did not converge");
}

ComplexSpectrum direct_spectrum_complex(const Problem& problem) {
  const auto& tol = problem.tol();
  ComplexSpectrum out;
  const Problem unperturbed = problem.with_eps(0.0);
  const std::vector<EigenvalueRecord> seeds = direct_spectrum_real(unperturbed);

  // Continuation in eps with a linear predictor. A step is accepted when the Newton correction
  // stays below a tenth of the level spacing, otherwise the eps increment is halved.
  const double spacing =
      kPi * problem.h() / action_integral(unperturbed, problem.lambda0()).dvalue_dlambda.real();
  const double max_correction = 0.1 * spacing;
  std::vector<cplx> roots;
  for (const EigenvalueRecord& seed : seeds) {
    try {
      cplx lambda = problem.eps() > 0.0 ? seed.lambda : newton_on_wronskian(problem, seed.lambda);
      cplx slope = 0.0;
      double e = 0.0;
      double de = problem.eps() / tol.homotopy_steps;
      while (e < problem.eps()) {
        const double e_next = std::min(problem.eps(), e + de);
        const cplx predicted = lambda + slope * (e_next - e);
        cplx corrected;
        bool accepted = false;
        try {
          corrected = newton_on_wronskian(problem.with_eps(e_next), predicted);
          accepted = std::abs(corrected - predicted) <= max_correction;
        } catch (const Error&) {
          accepted = false;
        }
        if (!accepted) {
          de *= 0.5;
          if (de < problem.eps() * 1e-6) throw Error(ErrorCode::NoConvergence, "eps continuation stalled");
          continue;
        }
        slope = (corrected - lambda) / (e_next - e);
        lambda = corrected;
        e = e_next;
        de *= 1.5;
      }
      roots.push_back(lambda);
    } catch (const Error& err) {
      out.errors.push_back("seed " + std::to_string(seed.lambda.real()) + ": " + err.what());
    }
  }

  out.count = count_zeros(problem, window_rectangle(problem));
  const Rectangle& rect = out.count.rectangle;
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  const Branch branch = select_branch(problem.a1());
  for (cplx r : roots) {
    const bool inside = r.real() > rect.lower_left.real() && r.real() < rect.upper_right.real() &&
                        r.imag() > rect.lower_left.imag() && r.imag() < rect.upper_right.imag();
    const bool duplicate = std::any_of(out.records.begin(), out.records.end(), [&](const EigenvalueRecord& rec) {
      return std::abs(rec.lambda - r) <= tol.distinct;
    });
    if (!inside || duplicate) continue;
    EigenvalueRecord rec;
    rec.lambda = r;
    rec.k = static_cast<int>(out.records.size());
    rec.branch = branch;
    rec.method = Method::Direct;
    rec.residual = std::abs(wronskian(problem, r).w_value);
    rec.h = problem.h();
    rec.eps = problem.eps();
    out.records.push_back(rec);
  }
  out.complete = out.count.winding == static_cast<int>(out.records.size());
  if (out.count.winding > static_cast<int>(out.records.size())) {
    out.errors.push_back("MissedZeros: winding " + std::to_string(out.count.winding) + " exceeds " +
                         std::to_string(out.records.size()) + " found roots");
  }
  return out;
}

}  // namespace zs
