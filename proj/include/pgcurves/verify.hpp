#pragma once

// Self-contained oracle suite behind `pgcurve verify`. Every check draws its
// cases from one seeded generator, so a (seed, tolerances) pair always
// produces the same report.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pgcurves/classify.hpp"
#include "pgcurves/frenet.hpp"
#include "pgcurves/report.hpp"
#include "pgcurves/synth.hpp"

namespace pgc::verify {

/// mt19937_64 with a hand-rolled uniform: std distributions differ across
/// standard libraries, and the report must not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double sign() { return (gen_() >> 63) ? -1.0 : 1.0; }
  /// Uniform magnitude in [lo, hi] with a random sign.
  double signed_uniform(double lo, double hi) { return sign() * uniform(lo, hi); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0.0, 1.0) * n) % n; }

 private:
  std::mt19937_64 gen_;
};

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;   // worst case over all draws
  double tolerance = 0.0;
  std::size_t cases = 0;
  std::string detail;      // the failing case, when there is one
};

inline std::map<std::string, double> default_tolerances() {
  return {{"ode_residual", 1e-10},      {"normal_fit", 1e-8},
          {"rectifying_beta", 1e-6},    {"rectifying_params", 1e-5},
          {"rectifying_slope", 1e-6},   {"conservation", 1e-6},
          {"rectifying_properties", 1e-5}, {"torsion_equivalence", 1e-12},
          {"constants_of_motion", 1e-8}, {"frenet_residual", 1e-9},
          {"order_min", 12.0},          {"order_max", 20.0}};
}

struct Options {
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances = default_tolerances();
  double step = kDefaultStep;
};

/// Closed-form curves used by the Frenet and torsion checks.
struct BuiltinCurve {
  const char* y;
  const char* z;
  double s_min;
  double s_max;
};

inline const std::vector<BuiltinCurve>& builtin_curves() {
  static const std::vector<BuiltinCurve> curves = {
      {"cosh(s)", "sinh(s)", -2, 2},          {"s^2/2", "0", -3, 3},
      {"s", "s^2", -2, 2},                    {"exp(s)", "s", -2, 2},
      {"2*cosh(s)", "sin(s)", -2, 2},         {"sin(s)", "cosh(s) + s^2", -2, 2},
      {"s^2/2 + 0.1*tanh(s)", "0.05*s^3", -1, 1}, {"(1+s^2)^1.5", "log(2+s)", -1, 1},
      {"0.5*exp(-s)", "2*s^2 + cos(s)", -1, 1}, {"sqrt(s+4) + s^2", "sin(s)/4", -1, 1},
  };
  return curves;
}

namespace detail {

inline std::string fmt(double v) { return report::format_double(v); }

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& at) {
    if (!(v <= value)) {  // NaN counts as worst
      value = v;
      where = at;
    }
  }
};

inline Check finish(std::string name, const Worst& w, double tol, std::size_t cases) {
  Check c;
  c.name = std::move(name);
  c.residual = w.value;
  c.tolerance = tol;
  c.cases = cases;
  c.passed = w.value <= tol;
  if (!c.passed) c.detail = w.where;
  return c;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

struct RectifyingCase {
  double m1, n1, kappa;
};

inline RectifyingCase draw_rectifying(Rng& rng) {
  const double m1 = rng.uniform(-2.0, 2.0);
  const double n1 = rng.signed_uniform(0.5, 3.0);
  return {m1, n1, rng.uniform(0.5, 3.0)};
}

}  // namespace detail

/// Closed-form normal components substituted into the normal ODE system.
inline Check check_ode_residual(Rng& rng, double tol, std::size_t draws = 100) {
  const auto grid = detail::linspace(-1.0, 1.0, 41);
  detail::Worst w;
  for (std::size_t k = 0; k < draws; ++k) {
    const NormalClosedForm f{rng.uniform(0.1, 10.0), rng.signed_uniform(0.1, 5.0),
                             {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                              rng.uniform(-1, 1)}};
    const OdeResidual r = normal_ode_residual([&](const Jet3& s) { return f.xi(s); },
                                              [&](const Jet3& s) { return f.eta(s); }, f.kappa,
                                              f.tau, grid);
    w.update(std::max(r.r1, r.r2), "kappa=" + detail::fmt(f.kappa) + " tau=" + detail::fmt(f.tau));
  }
  return detail::finish("ode_residual", w, tol, draws);
}

/// Closed-form samples -> six-parameter fit -> max |recovered - generating|.
inline Check check_normal_fit(Rng& rng, double tol, std::size_t draws = 50) {
  const auto grid = detail::linspace(-1.0, 1.0, 101);
  detail::Worst w;
  for (std::size_t k = 0; k < draws; ++k) {
    const double kappa = rng.uniform(0.1, 10.0);
    const double tau = rng.signed_uniform(0.1, 5.0);
    const std::array<double, 4> c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-1, 1)};
    const NormalSeries ser = synth_normal_components(kappa, tau, c, grid);
    const NormalFit f = fit_normal_series(ser.s, ser.xi, ser.eta);
    double err = std::max(std::fabs(f.kappa0 - kappa), std::fabs(f.tau0 - tau));
    for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::fabs(f.c[i] - c[i]));
    w.update(err, "kappa=" + detail::fmt(kappa) + " tau=" + detail::fmt(tau) + " c=" +
                      detail::fmt(c[0]) + "," + detail::fmt(c[1]) + "," + detail::fmt(c[2]) +
                      "," + detail::fmt(c[3]));
  }
  return detail::finish("normal_fit", w, tol, draws);
}

/// Synthesize rectifying curves, classify them, and test the fitted
/// parameters, conservation law and rectifying properties. Returns several
/// checks sharing the same draws.
inline std::vector<Check> check_rectifying(Rng& rng, const std::map<std::string, double>& tol,
                                           double step, std::size_t draws = 50) {
  detail::Worst beta, params, slope, cons, props, verdict;
  for (std::size_t k = 0; k < draws; ++k) {
    const auto [m1, n1, kappa] = detail::draw_rectifying(rng);
    const std::string at =
        "m1=" + detail::fmt(m1) + " n1=" + detail::fmt(n1) + " kappa=" + detail::fmt(kappa);
    // tau vanishes at s = -m1; start just past it.
    const RectifyingSynthesis syn =
        synth_rectifying(m1, n1, Expr::constant(kappa), -m1 + 0.2, -m1 + 1.2, step);
    const Trajectory& tr = syn.trajectory;
    const CurveDef c = tr.to_curve(tr.stride_for(kSampledKnotSpacing));
    const RectifyingVerdict v = classify_rectifying(c, {}, tol.at("rectifying_beta"));
    verdict.update(v.is_rectifying ? 0.0 : 1.0, at);
    beta.update(v.beta_max, at);
    params.update(std::max(std::fabs(v.m1 - m1), std::fabs(v.n1 - n1)), at);
    slope.update(std::fabs(v.slope_consistency), at);
    cons.update(conservation_spread(tr, m1, n1), at);
    if (v.is_rectifying) {
      const RectifyingProperties p =
          check_rectifying_properties(c, {}, v, tol.at("rectifying_properties"));
      double worst = std::max({p.distance_residual, p.tangential_residual,
                               p.normal_length_spread, p.binormal_spread});
      if (!p.all()) worst = std::max(worst, 2.0 * tol.at("rectifying_properties"));
      props.update(worst, at);
    } else {
      props.update(INFINITY, at);
    }
  }
  return {detail::finish("rectifying_verdict", verdict, 0.0, draws),
          detail::finish("rectifying_beta", beta, tol.at("rectifying_beta"), draws),
          detail::finish("rectifying_params", params, tol.at("rectifying_params"), draws),
          detail::finish("rectifying_slope", slope, tol.at("rectifying_slope"), draws),
          detail::finish("conservation", cons, tol.at("conservation"), draws),
          detail::finish("rectifying_properties", props, tol.at("rectifying_properties"), draws)};
}

/// tau from the frame formula against the determinant form, relative to the
/// conditioning scale of the numerator.
inline Check check_torsion_equivalence(Rng& rng, double tol, std::size_t draws = 10000) {
  std::vector<CurveDef> curves;
  for (const auto& b : builtin_curves()) curves.push_back(CurveDef::analytic(b.y, b.z, b.s_min, b.s_max, 2));
  detail::Worst w;
  for (std::size_t k = 0; k < draws; ++k) {
    const std::size_t i = rng.index(curves.size());
    const CurveDef& c = curves[i];
    const double s = rng.uniform(c.s_min(), c.s_max());
    const auto [y, z] = c.jets(s);
    const FrenetData f = frame_from_jets(s, y, z);
    const double scale = std::max(
        std::fabs(f.tau),
        (std::fabs(y.d2() * z.d3()) + std::fabs(y.d3() * z.d2())) / (f.kappa * f.kappa));
    const double rel = std::fabs(f.tau - torsion_det(c, s)) / std::max(scale, 1e-300);
    w.update(rel, std::string(builtin_curves()[i].y) + " / " + builtin_curves()[i].z + " s=" +
                      detail::fmt(s));
  }
  return detail::finish("torsion_equivalence", w, tol, draws);
}

/// Frenet residuals on every built-in curve at 1000 grid points.
inline Check check_frenet_residuals(double tol) {
  detail::Worst w;
  std::size_t n = 0;
  for (const auto& b : builtin_curves()) {
    const CurveDef c = CurveDef::analytic(b.y, b.z, b.s_min, b.s_max, 1000);
    for (double s : c.grid()) {
      const FrenetResiduals r = frenet_residuals(c, s);
      w.update(std::max({r.t, r.n, r.b}), std::string(b.y) + " / " + b.z + " s=" + detail::fmt(s));
      ++n;
    }
  }
  return detail::finish("frenet_residual", w, tol, n);
}

/// Drift of n.n, b.b, n.b and det(t, n, b) over length-4 integrations.
inline Check check_constants_of_motion(Rng& rng, double tol, double step, std::size_t draws = 10) {
  detail::Worst w;
  for (std::size_t k = 0; k < draws; ++k) {
    const double k0 = rng.uniform(0.5, 2.0);
    const double k1 = rng.uniform(0.0, 0.4);
    const double t0 = rng.uniform(-1.0, 1.0);
    const double t1 = rng.uniform(-1.0, 1.0);
    const std::string ks = report::format_double(k0) + "+" + report::format_double(k1) + "*sin(s)";
    const std::string ts = report::format_double(t0) + "+" + report::format_double(t1) + "*cos(2*s)";
    const InvariantProfile p{Expr::parse(ks), Expr::parse(ts), 0.0, 4.0};
    const auto d = invariant_drift(integrate_frenet(p, canonical_state(0.0), step));
    w.update(*std::max_element(d.begin(), d.end()), "kappa=" + ks + " tau=" + ts);
  }
  return detail::finish("constants_of_motion", w, tol, draws);
}

/// Endpoint-error ratio under step halving on kappa = tau = 1, whose solution
/// from the canonical frame is r = (s, cosh s - 1, sinh s - s).
inline double integrator_order_ratio(double h) {
  const InvariantProfile p{Expr::constant(1.0), Expr::constant(1.0), 0.0, 1.0};
  const auto err = [&](double step) {
    const FrenetState e = integrate_frenet(p, canonical_state(0.0), step).states.back();
    return std::hypot(e.r.y - (std::cosh(1.0) - 1.0), e.r.z - (std::sinh(1.0) - 1.0));
  };
  return err(h) / err(0.5 * h);
}

inline Check check_integrator_order(double lo, double hi) {
  Check c;
  c.name = "integrator_order";
  c.residual = integrator_order_ratio(0.1);
  c.tolerance = lo;
  c.cases = 1;
  c.passed = c.residual >= lo && c.residual <= hi;
  if (!c.passed) c.detail = "ratio outside [" + detail::fmt(lo) + ", " + detail::fmt(hi) + "]";
  return c;
}

inline std::vector<Check> run_suite(const Options& opt) {
  const auto& t = opt.tolerances;
  Rng rng(opt.seed);
  std::vector<Check> out;
  out.push_back(check_frenet_residuals(t.at("frenet_residual")));
  out.push_back(check_torsion_equivalence(rng, t.at("torsion_equivalence")));
  out.push_back(check_ode_residual(rng, t.at("ode_residual")));
  out.push_back(check_normal_fit(rng, t.at("normal_fit")));
  for (auto& c : check_rectifying(rng, t, opt.step)) out.push_back(std::move(c));
  out.push_back(check_constants_of_motion(rng, t.at("constants_of_motion"), opt.step));
  out.push_back(check_integrator_order(t.at("order_min"), t.at("order_max")));
  return out;
}

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

inline report::json suite_json(const Options& opt, const std::vector<Check>& checks) {
  report::json j = report::document("verify");
  j["seed"] = opt.seed;
  j["step"] = opt.step;
  report::json tol = report::json::object();
  for (const auto& [k, v] : opt.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  report::json arr = report::json::array();
  for (const auto& c : checks) {
    report::json e{{"name", c.name},
                   {"passed", c.passed},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"cases", c.cases}};
    if (!c.detail.empty()) e["failing_case"] = c.detail;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["passed"] = all_passed(checks);
  return j;
}

}  // namespace pgc::verify
