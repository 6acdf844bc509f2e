#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "pgcurves/error.hpp"

namespace pgc {

/// Truncated Taylor series of degree N about a point. Coefficients are stored
/// normalized (c[k] = f^(k) / k!); derivative(k) returns the raw derivative.
///
/// Arithmetic follows the usual recurrences for automatic Taylor expansion,
/// so every derivative up to order N is exact up to rounding.
template <std::size_t N>
class TaylorJet {
 public:
  static constexpr std::size_t order = N;

  constexpr TaylorJet() = default;
  constexpr TaylorJet(double value) { c_[0] = value; }  // NOLINT: implicit constant lift

  /// The independent variable s evaluated at `at`.
  static constexpr TaylorJet variable(double at) {
    TaylorJet j(at);
    if constexpr (N >= 1) j.c_[1] = 1.0;
    return j;
  }

  /// Builds a jet from raw derivatives f, f', f'', ...
  static TaylorJet from_derivatives(const std::array<double, N + 1>& d) {
    TaylorJet j;
    double fact = 1.0;
    for (std::size_t k = 0; k <= N; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  constexpr double value() const { return c_[0]; }
  constexpr double coefficient(std::size_t k) const { return c_[k]; }
  constexpr double& coefficient(std::size_t k) { return c_[k]; }

  double derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c_[k] * fact;
  }

  // Shorthands for the degree-3 case used throughout the curve code.
  double v() const { return derivative(0); }
  double d1() const { return derivative(1); }
  double d2() const { return derivative(2); }
  double d3() const { return derivative(3); }

  /// The jet of f' of degree N-1.
  TaylorJet<N - 1> differentiate() const
    requires(N >= 1)
  {
    TaylorJet<N - 1> out;
    for (std::size_t k = 0; k + 1 <= N; ++k) {
      out.coefficient(k) = static_cast<double>(k + 1) * c_[k + 1];
    }
    return out;
  }

  /// Drops coefficients above degree M.
  template <std::size_t M>
  TaylorJet<M> truncate() const
    requires(M <= N)
  {
    TaylorJet<M> out;
    for (std::size_t k = 0; k <= M; ++k) out.coefficient(k) = c_[k];
    return out;
  }

  bool all_finite() const {
    for (double x : c_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  TaylorJet& operator+=(const TaylorJet& o) {
    for (std::size_t k = 0; k <= N; ++k) c_[k] += o.c_[k];
    return *this;
  }
  TaylorJet& operator-=(const TaylorJet& o) {
    for (std::size_t k = 0; k <= N; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TaylorJet& operator*=(double a) {
    for (double& x : c_) x *= a;
    return *this;
  }

  friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend TaylorJet operator-(TaylorJet a) { return a *= -1.0; }
  friend TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
  friend TaylorJet operator*(double s, TaylorJet a) { return a *= s; }

  // Cauchy product.
  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    TaylorJet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      r.c_[k] = acc;
    }
    return r;
  }

  friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) {
    if (b.c_[0] == 0.0) throw DomainError("/", "division by zero");
    TaylorJet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double acc = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) acc -= b.c_[j] * r.c_[k - j];
      r.c_[k] = acc / b.c_[0];
    }
    return r;
  }

 private:
  std::array<double, N + 1> c_{};
};

using Jet3 = TaylorJet<3>;

// ---------------------------------------------------------------------------
// Elementary functions. Each takes the node name for error reporting.

template <std::size_t N>
TaylorJet<N> exp(const TaylorJet<N>& u) {
  TaylorJet<N> w(std::exp(u.value()));
  for (std::size_t k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc += static_cast<double>(j) * u.coefficient(j) * w.coefficient(k - j);
    }
    w.coefficient(k) = acc / static_cast<double>(k);
  }
  return w;
}

template <std::size_t N>
TaylorJet<N> log(const TaylorJet<N>& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw DomainError("log", "argument must be positive");
  TaylorJet<N> w(std::log(u0));
  for (std::size_t k = 1; k <= N; ++k) {
    double acc = u.coefficient(k);
    for (std::size_t j = 1; j < k; ++j) {
      acc -= static_cast<double>(j) * w.coefficient(j) * u.coefficient(k - j) /
             static_cast<double>(k);
    }
    w.coefficient(k) = acc / u0;
  }
  return w;
}

template <std::size_t N>
TaylorJet<N> sqrt(const TaylorJet<N>& u) {
  const double u0 = u.value();
  if (u0 < 0.0) throw DomainError("sqrt", "argument must be non-negative");
  if (u0 == 0.0 && N > 0) throw DomainError("sqrt", "not differentiable at 0");
  TaylorJet<N> w(std::sqrt(u0));
  for (std::size_t k = 1; k <= N; ++k) {
    double acc = u.coefficient(k);
    for (std::size_t j = 1; j < k; ++j) acc -= w.coefficient(j) * w.coefficient(k - j);
    w.coefficient(k) = acc / (2.0 * w.value());
  }
  return w;
}

namespace detail {

// Joint recurrence for (sin, cos) when sign = -1 and (sinh, cosh) when +1.
template <std::size_t N>
void trig_pair(const TaylorJet<N>& u, double sign, TaylorJet<N>& s, TaylorJet<N>& c) {
  for (std::size_t k = 1; k <= N; ++k) {
    double as = 0.0;
    double ac = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double ju = static_cast<double>(j) * u.coefficient(j);
      as += ju * c.coefficient(k - j);
      ac += ju * s.coefficient(k - j);
    }
    s.coefficient(k) = as / static_cast<double>(k);
    c.coefficient(k) = sign * ac / static_cast<double>(k);
  }
}

}  // namespace detail

template <std::size_t N>
TaylorJet<N> sin(const TaylorJet<N>& u) {
  TaylorJet<N> s(std::sin(u.value())), c(std::cos(u.value()));
  detail::trig_pair(u, -1.0, s, c);
  return s;
}

template <std::size_t N>
TaylorJet<N> cos(const TaylorJet<N>& u) {
  TaylorJet<N> s(std::sin(u.value())), c(std::cos(u.value()));
  detail::trig_pair(u, -1.0, s, c);
  return c;
}

template <std::size_t N>
TaylorJet<N> sinh(const TaylorJet<N>& u) {
  TaylorJet<N> s(std::sinh(u.value())), c(std::cosh(u.value()));
  detail::trig_pair(u, 1.0, s, c);
  return s;
}

template <std::size_t N>
TaylorJet<N> cosh(const TaylorJet<N>& u) {
  TaylorJet<N> s(std::sinh(u.value())), c(std::cosh(u.value()));
  detail::trig_pair(u, 1.0, s, c);
  return c;
}

// w' = (1 - w^2) u'
template <std::size_t N>
TaylorJet<N> tanh(const TaylorJet<N>& u) {
  TaylorJet<N> w(std::tanh(u.value()));
  TaylorJet<N> q(1.0 - w.value() * w.value());
  for (std::size_t k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc += static_cast<double>(j) * u.coefficient(j) * q.coefficient(k - j);
    }
    w.coefficient(k) = acc / static_cast<double>(k);
    double sq = 0.0;
    for (std::size_t i = 0; i <= k; ++i) sq += w.coefficient(i) * w.coefficient(k - i);
    q.coefficient(k) = -sq;
  }
  return w;
}

template <std::size_t N>
TaylorJet<N> abs(const TaylorJet<N>& u) {
  if (u.value() > 0.0) return u;
  if (u.value() < 0.0) return -u;
  throw DomainError("abs", "not differentiable at 0");
}

/// u^p for a constant exponent. Integral exponents use repeated products so
/// that negative or zero bases stay valid.
template <std::size_t N>
TaylorJet<N> pow(const TaylorJet<N>& u, double p) {
  if (p == std::floor(p) && std::fabs(p) <= 64.0) {
    auto n = static_cast<long>(std::fabs(p));
    TaylorJet<N> result(1.0);
    TaylorJet<N> base = u;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    if (p < 0.0) {
      if (u.value() == 0.0) throw DomainError("^", "zero raised to a negative power");
      return TaylorJet<N>(1.0) / result;
    }
    return result;
  }
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw DomainError("^", "non-integer power of a non-positive base");
  TaylorJet<N> w(std::pow(u0, p));
  for (std::size_t k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * u.coefficient(j) *
             w.coefficient(k - j);
    }
    w.coefficient(k) = acc / (static_cast<double>(k) * u0);
  }
  return w;
}

}  // namespace pgc
