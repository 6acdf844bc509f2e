#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pgcurves/error.hpp"
#include "pgcurves/expr.hpp"
#include "pgcurves/spline.hpp"
#include "pgcurves/vector.hpp"

namespace pgc {

/// A curve in graph form r(s) = (s + x_offset, y(s), z(s)), with s the
/// pseudo-Galilean arc length. Components are either closed-form
/// expressions (exact jets) or samples (spline jets).
class CurveDef {
 public:
  struct Analytic {
    Expr y;
    Expr z;
  };
  struct Sampled {
    HermiteSpline y;
    HermiteSpline z;
    double x_offset = 0.0;
  };

  static CurveDef analytic(Expr y, Expr z, double s_min, double s_max, std::size_t samples) {
    CurveDef c;
    c.source_ = Analytic{std::move(y), std::move(z)};
    c.set_grid(s_min, s_max, samples);
    return c;
  }

  static CurveDef analytic(std::string_view y, std::string_view z, double s_min, double s_max,
                           std::size_t samples, std::string_view param = "s") {
    return analytic(Expr::parse(y, param), Expr::parse(z, param), s_min, s_max, samples);
  }

  /// Sampled curve from rows (s, x, y, z). x must equal s plus a constant
  /// (x is the arc-length parameter up to a shift). samples = 0 means one grid
  /// point per input row.
  static CurveDef sampled(std::vector<double> s, const std::vector<double>& x,
                          std::vector<double> y, std::vector<double> z, std::size_t samples = 0) {
    if (s.size() != x.size() || s.size() != y.size() || s.size() != z.size()) {
      throw InputError("sampled curve: column lengths differ");
    }
    if (s.empty()) throw InputError("sampled curve: no rows");
    double offset = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) offset += x[i] - s[i];
    offset /= static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double scale = std::max({1.0, std::fabs(x[i]), std::fabs(s[i])});
      if (std::fabs(x[i] - s[i] - offset) > 1e-9 * scale) {
        throw InputError("sampled curve: x - s is not constant (row " + std::to_string(i + 1) +
                         "); x must be the arc-length parameter");
      }
    }
    const double lo = s.front();
    const double hi = s.back();
    const std::size_t n = samples == 0 ? s.size() : samples;
    std::vector<double> s2 = s;
    CurveDef c;
    c.source_ = Sampled{HermiteSpline(std::move(s), std::move(y)),
                        HermiteSpline(std::move(s2), std::move(z)), offset};
    c.set_grid(lo, hi, n);
    return c;
  }

  bool is_sampled() const { return std::holds_alternative<Sampled>(source_); }
  const Analytic* as_analytic() const { return std::get_if<Analytic>(&source_); }
  const Sampled* as_sampled() const { return std::get_if<Sampled>(&source_); }

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  std::size_t samples() const { return samples_; }

  /// Same curve with a different evaluation grid.
  CurveDef with_grid(double s_min, double s_max, std::size_t samples) const {
    CurveDef c = *this;
    c.set_grid(s_min, s_max, samples);
    return c;
  }

  /// Uniform grid of `samples` points over [s_min, s_max], endpoints exact.
  std::vector<double> grid() const {
    std::vector<double> g(samples_);
    const double h = (s_max_ - s_min_) / static_cast<double>(samples_ - 1);
    for (std::size_t i = 0; i < samples_; ++i) g[i] = s_min_ + h * static_cast<double>(i);
    g.back() = s_max_;
    return g;
  }

  /// Jets of y and z at s.
  std::pair<Jet3, Jet3> jets(double s) const {
    if (const auto* a = as_analytic()) return {a->y.jet3(s), a->z.jet3(s)};
    const auto& sm = std::get<Sampled>(source_);
    return {sm.y.jet(s), sm.z.jet(s)};
  }

  double x_offset() const {
    const auto* sm = as_sampled();
    return sm ? sm->x_offset : 0.0;
  }

  PGVector3 position(double s) const {
    if (const auto* a = as_analytic()) return {s, a->y.value(s), a->z.value(s)};
    const auto& sm = std::get<Sampled>(source_);
    return {s + sm.x_offset, sm.y.jet(s).value(), sm.z.jet(s).value()};
  }

 private:
  CurveDef() = default;

  void set_grid(double s_min, double s_max, std::size_t samples) {
    if (!(std::isfinite(s_min) && std::isfinite(s_max) && s_min < s_max)) {
      throw InputError("curve range requires finite s_min < s_max");
    }
    if (samples < 2) throw InputError("curve grid requires at least 2 samples");
    s_min_ = s_min;
    s_max_ = s_max;
    samples_ = samples;
  }

  std::variant<Analytic, Sampled> source_;
  double s_min_ = 0.0;
  double s_max_ = 1.0;
  std::size_t samples_ = 2;
};

namespace detail {

inline double bisect_root(auto&& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Re-expresses a curve (x(t), y(t), z(t)) in graph form with s = x by
/// inverting t -> x(t) pointwise (safeguarded Newton, bisection fallback).
/// Throws NotAdmissible if dx/dt vanishes or changes sign on [t_min, t_max].
inline CurveDef reparametrize_graph(const Expr& x, const Expr& y, const Expr& z, double t_min,
                                    double t_max, std::size_t samples, double tol = 1e-12) {
  if (!(t_min < t_max)) throw InputError("reparametrize: t_min < t_max required");
  if (samples < HermiteSpline::stencil) {
    throw InputError("reparametrize: at least " + std::to_string(HermiteSpline::stencil) +
                     " samples required");
  }

  const auto xdot = [&](double t) { return x.jet3(t).d1(); };
  const auto xddot = [&](double t) { return x.jet3(t).d2(); };
  const std::size_t m = std::max<std::size_t>(4 * samples, 1000) + 1;
  double prev_t = t_min;
  double prev_d = xdot(t_min);
  double prev_dd = xddot(t_min);
  if (std::fabs(prev_d) <= tol) throw NotAdmissible("dx/dt vanishes at t=" + std::to_string(t_min));
  for (std::size_t i = 1; i < m; ++i) {
    const double t = i + 1 == m ? t_max : t_min + (t_max - t_min) * static_cast<double>(i) /
                                                      static_cast<double>(m - 1);
    const double d = xdot(t);
    const double dd = xddot(t);
    if (std::fabs(d) <= tol) throw NotAdmissible("dx/dt vanishes at t=" + std::to_string(t));
    if ((d > 0.0) != (prev_d > 0.0)) {
      throw NotAdmissible("dx/dt changes sign in [" + std::to_string(prev_t) + ", " +
                          std::to_string(t) + "]");
    }
    // An interior extremum of dx/dt may touch zero between grid points.
    if ((dd > 0.0) != (prev_dd > 0.0) && dd != 0.0 && prev_dd != 0.0) {
      const double te = detail::bisect_root(xddot, prev_t, t, prev_dd);
      if (std::fabs(xdot(te)) <= tol) {
        throw NotAdmissible("dx/dt vanishes at t=" + std::to_string(te));
      }
    }
    prev_t = t;
    prev_d = d;
    prev_dd = dd;
  }

  const bool increasing = prev_d > 0.0;
  const double x0 = x.value(t_min);
  const double x1 = x.value(t_max);
  const double s_lo = std::min(x0, x1);
  const double s_hi = std::max(x0, x1);

  std::vector<double> ss(samples), xs(samples), ys(samples), zs(samples);
  double guess = increasing ? t_min : t_max;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = k + 1 == samples
                         ? s_hi
                         : s_lo + (s_hi - s_lo) * static_cast<double>(k) /
                                      static_cast<double>(samples - 1);
    double t;
    if (k == 0) {
      t = increasing ? t_min : t_max;
    } else if (k + 1 == samples) {
      t = increasing ? t_max : t_min;
    } else {
      // g(t) = x(t) - s is monotone; keep a bracket [lo, hi] with g(lo) < 0 < g(hi).
      double lo = increasing ? t_min : t_max;
      double hi = increasing ? t_max : t_min;
      // Iterate to full precision: the spline's third derivative amplifies
      // inversion error by 1/h^3, so stopping at `tol` is not enough.
      t = guess;
      double g = 0.0;
      for (int it = 0; it < 100; ++it) {
        const Jet3 j = x.jet3(t);
        g = j.value() - s;
        if (g == 0.0) break;
        if (g < 0.0) lo = t;
        else hi = t;
        double next = t - g / j.d1();
        const double a = std::min(lo, hi);
        const double b = std::max(lo, hi);
        if (!(next > a && next < b)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 2e-16 * std::max(1.0, std::fabs(t))) break;
        t = next;
      }
      if (std::fabs(x.value(t) - s) > tol * std::max(1.0, std::fabs(s))) {
        throw NotAdmissible("x(t) = " + std::to_string(s) + " could not be inverted");
      }
    }
    guess = t;
    ss[k] = s;
    xs[k] = s;
    ys[k] = y.value(t);
    zs[k] = z.value(t);
  }
  return CurveDef::sampled(std::move(ss), xs, std::move(ys), std::move(zs));
}

}  // namespace pgc
