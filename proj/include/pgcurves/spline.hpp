#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pgcurves/error.hpp"
#include "pgcurves/jet.hpp"

namespace pgc {

/// Finite-difference weights (Fornberg's recurrence) for derivatives 0..M at
/// x0 from arbitrary nodes. Result is w[m][j] for derivative m, node j.
template <std::size_t M>
std::array<std::vector<double>, M + 1> fornberg_weights(double x0, std::span<const double> x) {
  const std::size_t n = x.size();
  std::array<std::vector<double>, M + 1> c;
  for (auto& row : c) row.assign(n, 0.0);
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0] - x0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, M);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// C3 piecewise-septic Hermite interpolant. Node values are matched exactly;
/// nodal first to third derivatives come from 9-point finite-difference
/// stencils, and each interval carries the degree-7 polynomial fixed by
/// (value, d1, d2, d3) at both ends.
class HermiteSpline {
 public:
  static constexpr std::size_t stencil = 9;

  HermiteSpline() = default;

  HermiteSpline(std::vector<double> knots, std::vector<double> values)
      : x_(std::move(knots)), f_(std::move(values)) {
    if (x_.size() != f_.size()) throw InputError("spline: knot/value size mismatch");
    if (x_.size() < stencil) {
      throw InputError("spline: at least " + std::to_string(stencil) + " samples required");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw InputError("spline: knots must be strictly increasing");
    }
    const std::size_t n = x_.size();
    for (auto& d : d_) d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = window_start(i);
      const std::span<const double> xs(x_.data() + lo, stencil);
      const auto w = fornberg_weights<3>(x_[i], xs);
      for (std::size_t k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < stencil; ++j) acc += w[k + 1][j] * f_[lo + j];
        d_[k][i] = acc;
      }
    }
  }

  double s_min() const { return x_.front(); }
  double s_max() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return f_; }

  /// Value and derivatives up to third order at s (clamped to the knot range).
  Jet3 jet(double s) const {
    const std::size_t i = interval(s);
    const double h = x_[i + 1] - x_[i];
    const double t = (s - x_[i]) / h;
    const double h2 = h * h;
    const double h3 = h2 * h;
    const double a0 = f_[i];
    const double a1 = h * d_[0][i];
    const double a2 = 0.5 * h2 * d_[1][i];
    const double a3 = h3 * d_[2][i] / 6.0;
    const double F = f_[i + 1] - (a0 + a1 + a2 + a3);
    const double D = h * d_[0][i + 1] - (a1 + 2.0 * a2 + 3.0 * a3);
    const double E = h2 * d_[1][i + 1] - (2.0 * a2 + 6.0 * a3);
    const double G = h3 * d_[2][i + 1] - 6.0 * a3;
    const double a4 = 35.0 * F - 15.0 * D + 2.5 * E - G / 6.0;
    const double a5 = -84.0 * F + 39.0 * D - 7.0 * E + 0.5 * G;
    const double a6 = 70.0 * F - 34.0 * D + 6.5 * E - 0.5 * G;
    const double a7 = -20.0 * F + 10.0 * D - 2.0 * E + G / 6.0;
    const std::array<double, 8> a{a0, a1, a2, a3, a4, a5, a6, a7};
    std::array<double, 4> p{};
    // Horner for p and its first three t-derivatives.
    for (std::size_t k = 8; k-- > 0;) {
      p[3] = p[3] * t + 3.0 * p[2];
      p[2] = p[2] * t + 2.0 * p[1];
      p[1] = p[1] * t + p[0];
      p[0] = p[0] * t + a[k];
    }
    return Jet3::from_derivatives({p[0], p[1] / h, p[2] / h2, p[3] / h3});
  }

 private:
  std::size_t window_start(std::size_t i) const {
    const std::size_t half = stencil / 2;
    if (i < half) return 0;
    return std::min(i - half, x_.size() - stencil);
  }

  std::size_t interval(double s) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), s);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
  }

  std::vector<double> x_;
  std::vector<double> f_;
  std::array<std::vector<double>, 3> d_;  // nodal d1, d2, d3
};

}  // namespace pgc
