#pragma once

#include <cmath>
#include <ostream>

#include "pgcurves/error.hpp"

namespace pgc {

/// A vector of pseudo-Galilean space. x is the non-isotropic (absolute)
/// coordinate, (y, z) span the isotropic plane.
struct PGVector3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr PGVector3() = default;
  constexpr PGVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  /// Rejects NaN/Inf components.
  static PGVector3 checked(double x, double y, double z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw InputError("PGVector3 components must be finite");
    }
    return {x, y, z};
  }

  constexpr bool is_isotropic() const { return x == 0.0; }

  constexpr PGVector3& operator+=(const PGVector3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr PGVector3& operator-=(const PGVector3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr PGVector3& operator*=(double a) {
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }

  friend constexpr PGVector3 operator+(PGVector3 a, const PGVector3& b) { return a += b; }
  friend constexpr PGVector3 operator-(PGVector3 a, const PGVector3& b) { return a -= b; }
  friend constexpr PGVector3 operator-(const PGVector3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr PGVector3 operator*(double s, PGVector3 a) { return a *= s; }
  friend constexpr PGVector3 operator*(PGVector3 a, double s) { return a *= s; }
  friend constexpr bool operator==(const PGVector3&, const PGVector3&) = default;

  friend std::ostream& operator<<(std::ostream& os, const PGVector3& v) {
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  }
};

enum class CausalCharacter {
  NonIsotropic,
  IsotropicSpacelike,
  IsotropicTimelike,
  IsotropicLightlike,
};

inline const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::NonIsotropic: return "non-isotropic";
    case CausalCharacter::IsotropicSpacelike: return "spacelike";
    case CausalCharacter::IsotropicTimelike: return "timelike";
    case CausalCharacter::IsotropicLightlike: return "lightlike";
  }
  return "?";
}

/// Pseudo-Galilean scalar product. Pairs with a non-isotropic member use the
/// x-product; isotropic pairs use the (+,-) product on the isotropic plane.
constexpr double pg_inner(const PGVector3& u, const PGVector3& v) {
  if (u.x != 0.0 || v.x != 0.0) return u.x * v.x;
  return u.y * v.y - u.z * v.z;
}

/// Zero tests are exact; callers with measured data snap near-zero x first.
constexpr CausalCharacter causal_character(const PGVector3& u) {
  if (u.x != 0.0) return CausalCharacter::NonIsotropic;
  const double q = u.y * u.y - u.z * u.z;
  if (q > 0.0) return CausalCharacter::IsotropicSpacelike;
  if (q < 0.0) return CausalCharacter::IsotropicTimelike;
  return CausalCharacter::IsotropicLightlike;
}

/// Determinant of the 3x3 matrix with rows u, v, w.
constexpr double det3(const PGVector3& u, const PGVector3& v, const PGVector3& w) {
  return u.x * (v.y * w.z - v.z * w.y) - u.y * (v.x * w.z - v.z * w.x) +
         u.z * (v.x * w.y - v.y * w.x);
}

/// Plain Euclidean length, used only for residual reporting.
inline double euclidean_norm(const PGVector3& u) { return std::hypot(u.x, u.y, u.z); }

}  // namespace pgc
