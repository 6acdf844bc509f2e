#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pgcurves/curve.hpp"
#include "pgcurves/error.hpp"
#include "pgcurves/jet.hpp"
#include "pgcurves/vector.hpp"

namespace pgc {

inline constexpr double kDefaultTolAdm = 1e-12;

/// Frenet trihedron and invariants at one arc-length value.
struct FrenetData {
  double s = 0.0;
  PGVector3 t;
  PGVector3 n;
  PGVector3 b;
  int eps = 1;  // sign(y''^2 - z''^2)
  double kappa = 0.0;
  double tau = 0.0;
};

/// Frame from the y and z jets at s. n and b are built from r'' and the sign
/// eps is chosen so that det(t, n, b) = 1.
inline FrenetData frame_from_jets(double s, const Jet3& y, const Jet3& z,
                                  double tol_adm = kDefaultTolAdm) {
  const double ypp = y.d2();
  const double zpp = z.d2();
  const double disc = ypp * ypp - zpp * zpp;
  if (!(std::fabs(disc) >= tol_adm)) {
    throw NotAdmissible("y''^2 - z''^2 = " + std::to_string(disc) + " at s=" + std::to_string(s));
  }
  FrenetData f;
  f.s = s;
  f.eps = disc > 0.0 ? 1 : -1;
  f.kappa = std::sqrt(std::fabs(disc));
  f.t = {1.0, y.d1(), z.d1()};
  f.n = {0.0, ypp / f.kappa, zpp / f.kappa};
  f.b = {0.0, f.eps * zpp / f.kappa, f.eps * ypp / f.kappa};
  f.tau = (ypp * z.d3() - y.d3() * zpp) / (f.kappa * f.kappa);
  if (std::fabs(det3(f.t, f.n, f.b) - 1.0) > 1e-9) {
    throw SingularFrame("det(t, n, b) != 1 at s=" + std::to_string(s));
  }
  return f;
}

inline FrenetData frame_at(const CurveDef& c, double s, double tol_adm = kDefaultTolAdm) {
  const auto [y, z] = c.jets(s);
  return frame_from_jets(s, y, z, tol_adm);
}

/// Torsion as det(r', r'', r''') / kappa^2. Independent of frame_at's formula.
inline double torsion_det(const CurveDef& c, double s, double tol_adm = kDefaultTolAdm) {
  const auto [y, z] = c.jets(s);
  const PGVector3 r1{1.0, y.d1(), z.d1()};
  const PGVector3 r2{0.0, y.d2(), z.d2()};
  const PGVector3 r3{0.0, y.d3(), z.d3()};
  const double k2 = std::fabs(r2.y * r2.y - r2.z * r2.z);
  if (!(k2 >= tol_adm)) throw NotAdmissible("lightlike r'' at s=" + std::to_string(s));
  return det3(r1, r2, r3) / k2;
}

struct FrenetResiduals {
  double t = 0.0;  // |t' - kappa n|
  double n = 0.0;  // |n' - tau b|
  double b = 0.0;  // |b' - tau n|
};

/// Residuals of t' = kappa n, n' = tau b, b' = tau n. The frame derivatives
/// come from first-order jets of the frame formulas themselves, so the check
/// does not assume the equations it verifies.
inline FrenetResiduals frenet_residuals(const CurveDef& c, double s,
                                        double tol_adm = kDefaultTolAdm) {
  using J1 = TaylorJet<1>;
  const auto [y, z] = c.jets(s);
  const FrenetData f = frame_from_jets(s, y, z, tol_adm);

  const J1 ty = y.differentiate().truncate<1>();  // (y', y'')
  const J1 tz = z.differentiate().truncate<1>();
  const J1 ypp = y.differentiate().differentiate();  // (y'', y''')
  const J1 zpp = z.differentiate().differentiate();
  const J1 kappa = sqrt(static_cast<double>(f.eps) * (ypp * ypp - zpp * zpp));
  const J1 ny = ypp / kappa;
  const J1 nz = zpp / kappa;
  const J1 by = static_cast<double>(f.eps) * zpp / kappa;
  const J1 bz = static_cast<double>(f.eps) * ypp / kappa;

  const PGVector3 dt{0.0, ty.derivative(1), tz.derivative(1)};
  const PGVector3 dn{0.0, ny.derivative(1), nz.derivative(1)};
  const PGVector3 db{0.0, by.derivative(1), bz.derivative(1)};
  return {euclidean_norm(dt - f.kappa * f.n), euclidean_norm(dn - f.tau * f.b),
          euclidean_norm(db - f.tau * f.n)};
}

struct AdmissibilityViolation {
  double s = 0.0;
  double discriminant = 0.0;  // y''^2 - z''^2 at s
  bool crossing = false;      // located sign change between grid points
};

struct AdmissibilityReport {
  bool admissible = true;
  double tol_adm = kDefaultTolAdm;
  std::size_t grid_points = 0;
  std::vector<AdmissibilityViolation> violations;
  /// Maximal admissible stretches [first, last] of grid values.
  std::vector<std::pair<double, double>> segments;
};

/// Scans the grid for points where |y''^2 - z''^2| < tol_adm, including sign changes of
/// y''^2 - z''^2 between neighbours (the normal passes through lightlike).
inline AdmissibilityReport check_admissible(const CurveDef& c, double tol_adm = kDefaultTolAdm) {
  AdmissibilityReport rep;
  rep.tol_adm = tol_adm;
  const auto grid = c.grid();
  rep.grid_points = grid.size();
  const auto disc_at = [&](double s) {
    const auto [y, z] = c.jets(s);
    return y.d2() * y.d2() - z.d2() * z.d2();
  };

  std::optional<std::pair<double, double>> open;
  double prev_disc = 0.0;
  bool prev_ok = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    double d;
    try {
      d = disc_at(s);
    } catch (const DomainError&) {
      d = std::numeric_limits<double>::quiet_NaN();
    }
    const bool ok = std::fabs(d) >= tol_adm;
    if (ok && prev_ok && ((d > 0.0) != (prev_disc > 0.0))) {
      const double sc = detail::bisect_root(disc_at, grid[i - 1], s, prev_disc);
      rep.violations.push_back({sc, disc_at(sc), true});
      if (open) rep.segments.push_back(*open);
      open.reset();
    }
    if (ok) {
      if (open) open->second = s;
      else open = std::make_pair(s, s);
    } else {
      rep.violations.push_back({s, d, false});
      if (open) rep.segments.push_back(*open);
      open.reset();
    }
    prev_ok = ok;
    prev_disc = d;
  }
  if (open) rep.segments.push_back(*open);
  rep.admissible = rep.violations.empty();
  return rep;
}

/// One row of a grid analysis; frame/residuals are empty at inadmissible points.
struct FrenetSample {
  double s = 0.0;
  std::optional<FrenetData> frame;
  FrenetResiduals residuals;
};

/// Frame and residuals on every grid point. Grid slots are disjoint, so the
/// work is split across `threads` workers without synchronization.
inline std::vector<FrenetSample> analyze_grid(const CurveDef& c, double tol_adm = kDefaultTolAdm,
                                              unsigned threads = 1) {
  const auto grid = c.grid();
  std::vector<FrenetSample> out(grid.size());
  const auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      out[i].s = grid[i];
      try {
        out[i].frame = frame_at(c, grid[i], tol_adm);
        out[i].residuals = frenet_residuals(c, grid[i], tol_adm);
      } catch (const NotAdmissible&) {
        out[i].frame.reset();
      } catch (const DomainError&) {
        out[i].frame.reset();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
  if (threads == 1) {
    work(0, grid.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (grid.size() + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      const std::size_t lo = k * chunk;
      const std::size_t hi = std::min(grid.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
  }  // joins
  return out;
}

}  // namespace pgc
