#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <cstddef>
#include <string>
#include <vector>

#include "pgcurves/classify.hpp"
#include "pgcurves/curve.hpp"
#include "pgcurves/error.hpp"
#include "pgcurves/expr.hpp"
#include "pgcurves/vector.hpp"

namespace pgc {

inline constexpr double kDefaultStep = 1e-3;
/// Knot spacing for synthesized curves handed to the sampled Frenet path.
inline constexpr double kSampledKnotSpacing = 1e-2;

/// Point and frame along a synthesized curve. t.x = 1 and n.x = b.x = 0 hold
/// by construction; the integrator never touches those components.
struct FrenetState {
  double s = 0.0;
  PGVector3 r;
  PGVector3 t{1.0, 0.0, 0.0};
  PGVector3 n{0.0, 1.0, 0.0};
  PGVector3 b{0.0, 0.0, 1.0};

  /// n_y^2 - n_z^2, b_y^2 - b_z^2, n_y b_y - n_z b_z: constant along the Frenet flow.
  std::array<double, 3> constants_of_motion() const {
    return {pg_inner(n, n), pg_inner(b, b), pg_inner(n, b)};
  }
};

/// Canonical start t = (1,0,0), n = (0,1,0), b = (0,0,1) at s with position r.
inline FrenetState canonical_state(double s, const PGVector3& r = {}) {
  FrenetState st;
  st.s = s;
  st.r = r;
  return st;
}

struct InvariantProfile {
  Expr kappa;
  Expr tau;
  double s_min = 0.0;
  double s_max = 1.0;
};

struct Trajectory {
  std::vector<FrenetState> states;

  /// Sampled graph-form curve through every `stride`-th point (the last point
  /// is always kept). Spline third derivatives lose ~ulp/h^3 to rounding;
  /// stride_for(kSampledKnotSpacing) keeps torsion accurate.
  CurveDef to_curve(std::size_t stride = 1) const {
    if (stride == 0) stride = 1;
    std::vector<double> s, x, y, z;
    const auto take = [&](const FrenetState& st) {
      s.push_back(st.s);
      x.push_back(st.r.x);
      y.push_back(st.r.y);
      z.push_back(st.r.z);
    };
    for (std::size_t i = 0; i < states.size(); i += stride) take(states[i]);
    if ((states.size() - 1) % stride != 0) take(states.back());
    return CurveDef::sampled(std::move(s), x, std::move(y), std::move(z));
  }

  /// Stride that brings knot spacing up to about `spacing`.
  std::size_t stride_for(double spacing) const {
    if (states.size() < 2) return 1;
    const double h = (states.back().s - states.front().s) / static_cast<double>(states.size() - 1);
    const auto k = static_cast<std::size_t>(spacing / h + 0.5);
    const std::size_t max_k = (states.size() - 1) / (HermiteSpline::stencil - 1);
    return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(1, max_k));
  }
};

namespace detail {

using State9 = std::array<double, 9>;  // r(3), t_y, t_z, n_y, n_z, b_y, b_z

inline State9 pack(const FrenetState& st) {
  return {st.r.x, st.r.y, st.r.z, st.t.y, st.t.z, st.n.y, st.n.z, st.b.y, st.b.z};
}

inline FrenetState unpack(double s, const State9& u) {
  FrenetState st;
  st.s = s;
  st.r = {u[0], u[1], u[2]};
  st.t = {1.0, u[3], u[4]};
  st.n = {0.0, u[5], u[6]};
  st.b = {0.0, u[7], u[8]};
  return st;
}

// r' = t, t' = kappa n, n' = tau b, b' = tau n.
inline State9 frenet_rhs(const State9& u, double kappa, double tau) {
  return {1.0,         u[3],        u[4],        kappa * u[5], kappa * u[6],
          tau * u[7],  tau * u[8],  tau * u[5],  tau * u[6]};
}

inline State9 axpy(const State9& u, double h, const State9& k) {
  State9 out;
  for (std::size_t i = 0; i < 9; ++i) out[i] = u[i] + h * k[i];
  return out;
}

}  // namespace detail

inline void validate_initial_frame(const FrenetState& init, double tol = 1e-12) {
  if (init.t.x != 1.0 || init.n.x != 0.0 || init.b.x != 0.0) {
    throw BadInitialFrame("initial frame needs t.x = 1 and n.x = b.x = 0");
  }
  const auto q = init.constants_of_motion();
  if (std::fabs(std::fabs(q[0]) - 1.0) > tol || std::fabs(q[0] + q[1]) > tol ||
      std::fabs(q[2]) > tol) {
    throw BadInitialFrame("initial n, b are not iso-orthonormal with opposite causal types");
  }
  if (std::fabs(det3(init.t, init.n, init.b) - 1.0) > tol) {
    throw BadInitialFrame("initial frame has det(t, n, b) != 1");
  }
}

/// Classical fourth-order Runge-Kutta integration of the Frenet system over
/// [p.s_min, p.s_max] from `init` (placed at s_min). The step is shrunk to
/// the largest value <= `step` that divides the range evenly. No
/// re-orthonormalization is applied.
inline Trajectory integrate_frenet(const InvariantProfile& p, const FrenetState& init,
                                   double step = kDefaultStep) {
  if (!(step > 0.0)) throw InvalidProfile("step must be positive");
  if (!(p.s_min < p.s_max)) throw InvalidProfile("profile needs s_min < s_max");
  validate_initial_frame(init);

  const double len = p.s_max - p.s_min;
  const auto steps = static_cast<std::size_t>(std::ceil(len / step - 1e-9));
  const double h = len / static_cast<double>(steps);

  const auto eval = [&](double s) {
    const double k = p.kappa.value(s);
    if (!(k > 0.0)) throw InvalidProfile("kappa(s) <= 0 at s=" + std::to_string(s));
    const double t = p.tau.value(s);
    if (!std::isfinite(t)) throw InvalidProfile("tau(s) not finite at s=" + std::to_string(s));
    return std::pair{k, t};
  };
  // Evaluate every stage abscissa up front so a bad profile fails before any work.
  std::vector<std::pair<double, double>> coef(2 * steps + 1);
  for (std::size_t i = 0; i <= 2 * steps; ++i) {
    const double s = i == 2 * steps ? p.s_max : p.s_min + 0.5 * h * static_cast<double>(i);
    coef[i] = eval(s);
  }

  Trajectory out;
  out.states.reserve(steps + 1);
  detail::State9 u = detail::pack(init);
  out.states.push_back(detail::unpack(p.s_min, u));
  for (std::size_t i = 0; i < steps; ++i) {
    const auto [k0, t0] = coef[2 * i];
    const auto [k1, t1] = coef[2 * i + 1];
    const auto [k2, t2] = coef[2 * i + 2];
    const auto a = detail::frenet_rhs(u, k0, t0);
    const auto b = detail::frenet_rhs(detail::axpy(u, 0.5 * h, a), k1, t1);
    const auto c = detail::frenet_rhs(detail::axpy(u, 0.5 * h, b), k1, t1);
    const auto d = detail::frenet_rhs(detail::axpy(u, h, c), k2, t2);
    for (std::size_t j = 0; j < 9; ++j) u[j] += h / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j]);
    const double s = i + 1 == steps ? p.s_max : p.s_min + h * static_cast<double>(i + 1);
    out.states.push_back(detail::unpack(s, u));
  }
  return out;
}

/// Largest drift of each constant of motion and of det(t, n, b) from its
/// initial value. Returned as {n.n, b.b, n.b, det}.
inline std::array<double, 4> invariant_drift(const Trajectory& tr) {
  std::array<double, 4> drift{};
  const auto q0 = tr.states.front().constants_of_motion();
  for (const auto& st : tr.states) {
    const auto q = st.constants_of_motion();
    for (std::size_t k = 0; k < 3; ++k) drift[k] = std::max(drift[k], std::fabs(q[k] - q0[k]));
    drift[3] = std::max(drift[3], std::fabs(det3(st.t, st.n, st.b) - 1.0));
  }
  return drift;
}

struct RectifyingSynthesis {
  double m1 = 0.0;
  double n1 = 1.0;
  InvariantProfile profile;
  Trajectory trajectory;
};

/// tau(s) = -(s + m1) kappa(s) / n1 as an expression.
inline Expr rectifying_torsion(double m1, double n1, const Expr& kappa) {
  const std::string text = "-((s+(" + detail::format_number(m1) + "))*(" + kappa.to_infix() +
                           "))/(" + detail::format_number(n1) + ")";
  return Expr::parse(text, "s");
}

/// Rectifying curve with tau/kappa = -(s + m1)/n1, started so that
/// r - (s + m1) t - n1 b vanishes at s_min; that bracket is then constant.
inline RectifyingSynthesis synth_rectifying(double m1, double n1, const Expr& kappa,
                                            double s_min, double s_max,
                                            double step = kDefaultStep) {
  if (n1 == 0.0 || !std::isfinite(n1)) throw InvalidProfile("n1 must be non-zero");
  if (kappa.param() != "s") throw InvalidProfile("kappa must be an expression in s");
  RectifyingSynthesis out;
  out.m1 = m1;
  out.n1 = n1;
  out.profile = {kappa, rectifying_torsion(m1, n1, kappa), s_min, s_max};
  FrenetState init = canonical_state(s_min);
  init.r = (s_min + m1) * init.t + n1 * init.b;
  out.trajectory = integrate_frenet(out.profile, init, step);
  return out;
}

/// Componentwise spread of r - (s + m1) t - n1 b along a trajectory.
inline double conservation_spread(const Trajectory& tr, double m1, double n1) {
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& st : tr.states) {
    const PGVector3 q = st.r - (st.s + m1) * st.t - n1 * st.b;
    const std::array<double, 3> v{q.x, q.y, q.z};
    for (std::size_t k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
}

struct NormalSeries {
  NormalClosedForm form;
  std::vector<double> s;
  std::vector<double> xi;
  std::vector<double> eta;
};

/// Samples the closed-form normal-curve components on a grid.
inline NormalSeries synth_normal_components(double kappa, double tau,
                                            const std::array<double, 4>& c,
                                            std::span<const double> grid) {
  if (std::fabs(tau) < kMinTorsion) throw ZeroTorsion("tau must be non-zero");
  NormalSeries out;
  out.form = {kappa, tau, c};
  out.s.assign(grid.begin(), grid.end());
  out.xi.reserve(grid.size());
  out.eta.reserve(grid.size());
  for (double s : grid) {
    out.xi.push_back(out.form.xi(s));
    out.eta.push_back(out.form.eta(s));
  }
  return out;
}

}  // namespace pgc
