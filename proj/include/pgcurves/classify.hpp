#pragma once

// Position-vector decomposition in the Frenet frame and the normal /
// rectifying characterizations built on it.
//
// <r, t>, <r, n>, <r, b> are the frame coefficients (alpha, beta, gamma) of
// r - p0 in the basis {t, n, b}, obtained by a linear solve. The kernel
// product pg_inner would give <r, n> = 0 for every curve (r is non-isotropic,
// n isotropic), which is not what the characterizations mean.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pgcurves/curve.hpp"
#include "pgcurves/error.hpp"
#include "pgcurves/frenet.hpp"
#include "pgcurves/jet.hpp"
#include "pgcurves/vector.hpp"

namespace pgc {

inline constexpr double kDefaultTolClassifyExact = 1e-6;
inline constexpr double kDefaultTolClassifySampled = 1e-4;
inline constexpr double kMinTorsion = 1e-9;
inline constexpr double kConstancyTol = 1e-6;

struct FrameComponents {
  double alpha = 0.0;  // tangential
  double beta = 0.0;   // principal normal
  double gamma = 0.0;  // binormal
};

/// Coefficients of d in the basis {t, n, b} of f.
inline FrameComponents decompose(const FrenetData& f, const PGVector3& d) {
  FrameComponents fc;
  fc.alpha = d.x;  // t is the only basis vector with an x-component (t.x = 1)
  const PGVector3 w = d - fc.alpha * f.t;
  const double det = f.n.y * f.b.z - f.n.z * f.b.y;
  if (std::fabs(det) < 1e-12) throw SingularFrame("n and b are linearly dependent");
  fc.beta = (w.y * f.b.z - w.z * f.b.y) / det;
  fc.gamma = (f.n.y * w.z - f.n.z * w.y) / det;
  return fc;
}

inline FrameComponents frame_components(const CurveDef& c, double s, const PGVector3& p0,
                                        double tol_adm = kDefaultTolAdm) {
  return decompose(frame_at(c, s, tol_adm), c.position(s) - p0);
}

/// Least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateFit("line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("line fit: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    f.max_residual = std::max(f.max_residual, std::fabs(y[i] - (f.slope * x[i] + f.intercept)));
  }
  return f;
}

struct RectifyingVerdict {
  bool is_rectifying = false;
  double m1 = 0.0;
  double n1 = 0.0;
  double a = 0.0;       // slope of tau/kappa against s
  double b_coef = 0.0;  // intercept of tau/kappa
  double beta_max = 0.0;
  double ratio_residual = 0.0;
  double rho_check = 0.0;
  double gamma_spread = 0.0;
  double tol = 0.0;
  /// <b, b> along the grid (+1 or -1); the eps of the distance formula.
  int binormal_sign = -1;
  /// a*n1 + 1 and b_coef*n1 + m1; both vanish under lambda*kappa + mu*tau = 0.
  double slope_consistency = 0.0;
  double intercept_consistency = 0.0;
};

namespace detail {

struct GridDecomposition {
  std::vector<double> s;
  std::vector<FrenetData> frames;
  std::vector<FrameComponents> comps;
};

inline GridDecomposition decompose_grid(const CurveDef& c, const PGVector3& p0, double tol_adm) {
  GridDecomposition g;
  g.s = c.grid();
  g.frames.reserve(g.s.size());
  g.comps.reserve(g.s.size());
  for (double s : g.s) {
    g.frames.push_back(frame_at(c, s, tol_adm));
    g.comps.push_back(decompose(g.frames.back(), c.position(s) - p0));
  }
  return g;
}

inline double mean(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace detail

/// Frame-sense squared distance |<r, r>| = |alpha^2 + beta^2 <n,n> + gamma^2 <b,b>|.
inline double frame_distance_squared(const FrenetData& f, const FrameComponents& fc) {
  return std::fabs(fc.alpha * fc.alpha + fc.beta * fc.beta * pg_inner(f.n, f.n) +
                   fc.gamma * fc.gamma * pg_inner(f.b, f.b));
}

/// Rectifying test: the position vector (relative to p0) has no principal
/// normal component anywhere on the grid, and tau/kappa is affine in s with
/// non-zero slope.
inline RectifyingVerdict classify_rectifying(const CurveDef& c, const PGVector3& p0, double tol,
                                             double tol_adm = kDefaultTolAdm) {
  if (c.samples() < 8) throw DegenerateFit("classification needs at least 8 grid points");
  const auto g = detail::decompose_grid(c, p0, tol_adm);
  const std::size_t n = g.s.size();

  RectifyingVerdict v;
  v.tol = tol;
  std::vector<double> shifted(n), gam(n), ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.beta_max = std::max(v.beta_max, std::fabs(g.comps[i].beta));
    shifted[i] = g.comps[i].alpha - g.s[i];
    gam[i] = g.comps[i].gamma;
    ratio[i] = g.frames[i].tau / g.frames[i].kappa;
  }
  v.m1 = detail::mean(shifted);
  v.n1 = detail::mean(gam);
  for (double x : gam) v.gamma_spread = std::max(v.gamma_spread, std::fabs(x - v.n1));

  const LineFit line = fit_line(g.s, ratio);
  v.a = line.slope;
  v.b_coef = line.intercept;
  v.ratio_residual = line.max_residual;
  v.slope_consistency = v.a * v.n1 + 1.0;
  v.intercept_consistency = v.b_coef * v.n1 + v.m1;

  v.binormal_sign = pg_inner(g.frames.front().b, g.frames.front().b) > 0.0 ? 1 : -1;
  const double eps = static_cast<double>(v.binormal_sign);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = g.s[i];
    const double predicted = std::fabs(s * s + 2.0 * v.m1 * s + v.m1 * v.m1 + eps * v.n1 * v.n1);
    v.rho_check = std::max(v.rho_check,
                           std::fabs(frame_distance_squared(g.frames[i], g.comps[i]) - predicted));
  }

  v.is_rectifying = v.beta_max <= tol && std::fabs(v.n1) > tol && std::fabs(v.a) > tol;
  return v;
}

/// Optional origin search: the p0 in the isotropic plane through `seed`
/// minimizing the sum of squared principal-normal components over the grid.
/// beta is affine in p0, so this is a two-unknown linear least-squares solve.
inline PGVector3 best_origin(const CurveDef& c, const PGVector3& seed,
                             double tol_adm = kDefaultTolAdm) {
  const auto g = detail::decompose_grid(c, seed, tol_adm);
  const auto n = static_cast<Eigen::Index>(g.s.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const FrenetData& f = g.frames[static_cast<std::size_t>(i)];
    const double det = f.n.y * f.b.z - f.n.z * f.b.y;
    A(i, 0) = f.b.z / det;
    A(i, 1) = -f.b.y / det;
    rhs(i) = g.comps[static_cast<std::size_t>(i)].beta;
  }
  const Eigen::Vector2d shift = A.colPivHouseholderQr().solve(rhs);
  return {seed.x, seed.y + shift(0), seed.z + shift(1)};
}

/// Distance, tangential, normal-length and binormal properties of a rectifying
/// curve, each with its residual.
struct RectifyingProperties {
  double tol = 0.0;
  // rho^2 = |s^2 + 2 m1 s + m1^2 + eps n1^2|
  bool distance_law = false;
  double distance_residual = 0.0;
  // <r, t> = s + m1
  bool tangential_component = false;
  double tangential_residual = 0.0;
  // |r^N| constant (= |n1|) and rho non-constant
  bool normal_length_constant = false;
  double normal_length = 0.0;
  double normal_length_spread = 0.0;
  double distance_spread = 0.0;
  // <r, b> constant and tau != 0
  bool binormal_constant = false;
  double binormal_spread = 0.0;
  double min_abs_tau = 0.0;

  bool all() const {
    return distance_law && tangential_component && normal_length_constant && binormal_constant;
  }
};

inline RectifyingProperties check_rectifying_properties(const CurveDef& c, const PGVector3& p0,
                                                        const RectifyingVerdict& v, double tol,
                                                        double tol_adm = kDefaultTolAdm) {
  if (!v.is_rectifying) throw Error("check_rectifying_properties requires a rectifying verdict");
  const auto g = detail::decompose_grid(c, p0, tol_adm);
  const double eps = static_cast<double>(v.binormal_sign);

  RectifyingProperties r;
  r.tol = tol;
  r.min_abs_tau = std::numeric_limits<double>::infinity();
  double rn_lo = std::numeric_limits<double>::infinity(), rn_hi = -rn_lo;
  double rho_lo = rn_lo, rho_hi = -rn_lo;
  double rn_sum = 0.0;
  for (std::size_t i = 0; i < g.s.size(); ++i) {
    const double s = g.s[i];
    const FrenetData& f = g.frames[i];
    const FrameComponents& fc = g.comps[i];

    const double rho2 = frame_distance_squared(f, fc);
    const double predicted = std::fabs(s * s + 2.0 * v.m1 * s + v.m1 * v.m1 + eps * v.n1 * v.n1);
    r.distance_residual = std::max(r.distance_residual, std::fabs(rho2 - predicted));
    rho_lo = std::min(rho_lo, std::sqrt(rho2));
    rho_hi = std::max(rho_hi, std::sqrt(rho2));

    r.tangential_residual = std::max(r.tangential_residual, std::fabs(fc.alpha - (s + v.m1)));

    const PGVector3 rn = fc.beta * f.n + fc.gamma * f.b;
    const double len = std::sqrt(std::fabs(pg_inner(rn, rn)));
    rn_lo = std::min(rn_lo, len);
    rn_hi = std::max(rn_hi, len);
    rn_sum += len;

    r.binormal_spread = std::max(r.binormal_spread, std::fabs(fc.gamma - v.n1));
    r.min_abs_tau = std::min(r.min_abs_tau, std::fabs(f.tau));
  }
  r.normal_length = rn_sum / static_cast<double>(g.s.size());
  r.normal_length_spread = rn_hi - rn_lo;
  r.distance_spread = rho_hi - rho_lo;

  r.distance_law = r.distance_residual <= tol;
  r.tangential_component = r.tangential_residual <= tol;
  r.normal_length_constant = r.normal_length_spread <= tol && r.distance_spread > tol;
  r.binormal_constant = r.binormal_spread <= tol && r.min_abs_tau > tol;
  return r;
}

/// Componentwise spread of r - p0 - (s + m1) t - n1 b over the grid; zero for
/// a rectifying curve with parameters (m1, n1).
inline double rectifying_bracket_spread(const CurveDef& c, const PGVector3& p0, double m1,
                                        double n1, double tol_adm = kDefaultTolAdm) {
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (double s : c.grid()) {
    const FrenetData f = frame_at(c, s, tol_adm);
    const PGVector3 q = c.position(s) - p0 - (s + m1) * f.t - n1 * f.b;
    const std::array<double, 3> comps{q.x, q.y, q.z};
    for (std::size_t k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], comps[k]);
      hi[k] = std::max(hi[k], comps[k]);
    }
  }
  return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
}

// ---------------------------------------------------------------------------
// Normal-curve components.

/// Closed-form principal-normal / binormal components of a normal curve:
///   xi(s)  = (c1 + c2 s) e^{-tau s} + (c3 + c4 s) e^{tau s} + kappa / tau^2
///   eta(s) = (c1 + c2 s) e^{-tau s} - (c3 + c4 s) e^{tau s}
struct NormalClosedForm {
  double kappa = 1.0;
  double tau = 1.0;
  std::array<double, 4> c{};

  template <std::size_t N>
  TaylorJet<N> xi(const TaylorJet<N>& s) const {
    const auto [decay, grow] = parts(s);
    return decay + grow + TaylorJet<N>(kappa / (tau * tau));
  }

  template <std::size_t N>
  TaylorJet<N> eta(const TaylorJet<N>& s) const {
    const auto [decay, grow] = parts(s);
    return decay - grow;
  }

  double xi(double s) const { return xi(TaylorJet<0>(s)).value(); }
  double eta(double s) const { return eta(TaylorJet<0>(s)).value(); }

 private:
  template <std::size_t N>
  std::pair<TaylorJet<N>, TaylorJet<N>> parts(const TaylorJet<N>& s) const {
    const TaylorJet<N> decay = (TaylorJet<N>(c[0]) + c[1] * s) * exp(-tau * s);
    const TaylorJet<N> grow = (TaylorJet<N>(c[2]) + c[3] * s) * exp(tau * s);
    return {decay, grow};
  }
};

struct NormalFit {
  double kappa0 = 0.0;
  double tau0 = 0.0;
  std::array<double, 4> c{};
  double xi_residual = 0.0;
  double eta_residual = 0.0;

  NormalClosedForm closed_form() const { return {kappa0, tau0, c}; }
};

namespace detail {

inline void normal_design(std::span<const double> s, double tau, bool with_offset,
                          Eigen::MatrixXd& A) {
  const auto n = static_cast<Eigen::Index>(s.size());
  A.setZero(2 * n, with_offset ? 5 : 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    const double em = std::exp(-tau * si);
    const double ep = std::exp(tau * si);
    A(i, 0) = em;
    A(i, 1) = si * em;
    A(i, 2) = ep;
    A(i, 3) = si * ep;
    A(n + i, 0) = em;
    A(n + i, 1) = si * em;
    A(n + i, 2) = -ep;
    A(n + i, 3) = -si * ep;
    if (with_offset) A(i, 4) = 1.0;
  }
}

inline void normal_residuals(std::span<const double> s, std::span<const double> xi,
                             std::span<const double> eta, NormalFit& fit) {
  const NormalClosedForm cf = fit.closed_form();
  fit.xi_residual = 0.0;
  fit.eta_residual = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    fit.xi_residual = std::max(fit.xi_residual, std::fabs(cf.xi(s[i]) - xi[i]));
    fit.eta_residual = std::max(fit.eta_residual, std::fabs(cf.eta(s[i]) - eta[i]));
  }
}

inline void check_series(std::span<const double> s, std::span<const double> xi,
                         std::span<const double> eta, std::size_t min_points) {
  if (s.size() != xi.size() || s.size() != eta.size()) {
    throw InputError("normal fit: series lengths differ");
  }
  if (s.size() < min_points) throw DegenerateFit("normal fit: too few samples");
}

}  // namespace detail

/// Four-parameter fit of (xi, eta) samples with kappa and tau known.
inline NormalFit fit_normal_series(std::span<const double> s, std::span<const double> xi,
                                   std::span<const double> eta, double kappa, double tau) {
  detail::check_series(s, xi, eta, 4);
  if (std::fabs(tau) < kMinTorsion) throw ZeroTorsion("tau ~ 0 makes kappa/tau^2 singular");
  Eigen::MatrixXd A;
  detail::normal_design(s, tau, false, A);
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::VectorXd rhs(2 * n);
  const double offset = kappa / (tau * tau);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = xi[static_cast<std::size_t>(i)] - offset;
    rhs(n + i) = eta[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
  NormalFit fit;
  fit.kappa0 = kappa;
  fit.tau0 = tau;
  for (int k = 0; k < 4; ++k) fit.c[static_cast<std::size_t>(k)] = sol(k);
  detail::normal_residuals(s, xi, eta, fit);
  return fit;
}

/// Six-parameter fit recovering kappa, tau and c1..c4 from samples alone.
/// A scan over tau with the linear parameters projected out supplies
/// starts for Levenberg-Marquardt on all parameters. Requires generic data: with
/// c = 0 only kappa/tau^2 is identifiable.
inline NormalFit fit_normal_series(std::span<const double> s, std::span<const double> xi,
                                   std::span<const double> eta) {
  detail::check_series(s, xi, eta, 6);
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::VectorXd data(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    data(i) = xi[static_cast<std::size_t>(i)];
    data(n + i) = eta[static_cast<std::size_t>(i)];
  }

  // theta = (c1, c2, c3, c4, K, tau) with K = kappa / tau^2. Scan tau with the
  // linear parameters projected out; every local minimum of the scan is a
  // candidate start, since the true minimum can be narrower than the scan step.
  struct Start {
    double cost;
    Eigen::VectorXd theta;
  };
  std::vector<Start> scan;
  Eigen::MatrixXd A;
  for (int sign : {-1, 1}) {
    for (int k = 0; k <= 400; ++k) {
      const double tau = sign * (0.02 + 0.02 * k);
      detail::normal_design(s, tau, true, A);
      const Eigen::VectorXd lin = A.colPivHouseholderQr().solve(data);
      Eigen::VectorXd th(6);
      th.head(5) = lin;
      th(5) = tau;
      scan.push_back({(A * lin - data).squaredNorm(), th});
    }
  }
  std::vector<Start> starts;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const bool edge = i % 401 == 0 || i % 401 == 400;
    if (edge || (scan[i].cost <= scan[i - 1].cost && scan[i].cost <= scan[i + 1].cost)) {
      starts.push_back(scan[i]);
    }
  }
  std::sort(starts.begin(), starts.end(),
            [](const Start& a, const Start& b) { return a.cost < b.cost; });
  if (starts.size() > 6) starts.resize(6);

  const auto residual = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    r.resize(2 * n);
    if (J) J->setZero(2 * n, 6);
    const double tau = th(5);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double si = s[static_cast<std::size_t>(i)];
      const double em = std::exp(-tau * si);
      const double ep = std::exp(tau * si);
      const double dec = (th(0) + th(1) * si) * em;
      const double gro = (th(2) + th(3) * si) * ep;
      r(i) = dec + gro + th(4) - data(i);
      r(n + i) = dec - gro - data(n + i);
      if (J) {
        auto& j = *J;
        j(i, 0) = em;
        j(i, 1) = si * em;
        j(i, 2) = ep;
        j(i, 3) = si * ep;
        j(i, 4) = 1.0;
        j(i, 5) = -si * dec + si * gro;
        j(n + i, 0) = em;
        j(n + i, 1) = si * em;
        j(n + i, 2) = -ep;
        j(n + i, 3) = -si * ep;
        j(n + i, 5) = -si * dec - si * gro;
      }
    }
  };

  // Levenberg-Marquardt from each start; keep the lowest final cost.
  const auto refine = [&](Eigen::VectorXd theta) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    residual(theta, r, &J);
    double cost = r.squaredNorm();
    double lambda = 1e-6;
    for (int it = 0; it < 200 && cost > 0.0; ++it) {
      const Eigen::MatrixXd JtJ = J.transpose() * J;
      const Eigen::VectorXd g = J.transpose() * r;
      Eigen::MatrixXd M = JtJ;
      M.diagonal() += lambda * JtJ.diagonal();
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      const Eigen::VectorXd trial = theta + step;
      Eigen::VectorXd rt;
      residual(trial, rt, nullptr);
      const double tcost = rt.squaredNorm();
      if (tcost < cost) {
        const bool converged = step.norm() <= 1e-15 * (1.0 + theta.norm());
        theta = trial;
        cost = tcost;
        residual(theta, r, &J);
        lambda = std::max(lambda * 0.1, 1e-15);
        if (converged) break;
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) break;
      }
    }
    return Start{cost, theta};
  };
  Start best{std::numeric_limits<double>::infinity(), starts.front().theta};
  for (const Start& st : starts) {
    Start r = refine(st.theta);
    if (r.cost < best.cost) best = std::move(r);
  }
  const Eigen::VectorXd& theta = best.theta;

  NormalFit fit;
  fit.tau0 = theta(5);
  if (std::fabs(fit.tau0) < kMinTorsion) throw ZeroTorsion("fitted tau ~ 0");
  fit.kappa0 = theta(4) * fit.tau0 * fit.tau0;
  for (int k = 0; k < 4; ++k) fit.c[static_cast<std::size_t>(k)] = theta(k);
  detail::normal_residuals(s, xi, eta, fit);
  return fit;
}

/// Fits the measured principal-normal and binormal components of a curve with
/// constant curvature and torsion to the closed-form normal-curve family.
inline NormalFit fit_normal_components(const CurveDef& c, const PGVector3& p0,
                                       double tol_adm = kDefaultTolAdm) {
  const auto g = detail::decompose_grid(c, p0, tol_adm);
  const std::size_t n = g.s.size();
  std::vector<double> kap(n), tor(n), beta(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    kap[i] = g.frames[i].kappa;
    tor[i] = g.frames[i].tau;
    beta[i] = g.comps[i].beta;
    gamma[i] = g.comps[i].gamma;
  }
  const double k0 = detail::mean(kap);
  const double t0 = detail::mean(tor);
  if (std::fabs(t0) < kMinTorsion) throw ZeroTorsion("torsion vanishes; kappa/tau^2 singular");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(kap[i] - k0) > kConstancyTol * std::fabs(k0) ||
        std::fabs(tor[i] - t0) > kConstancyTol * std::fabs(t0)) {
      throw NonConstantInvariants("kappa and tau must be constant (relative 1e-6); s=" +
                                  std::to_string(g.s[i]));
    }
  }
  return fit_normal_series(g.s, beta, gamma, k0, t0);
}

struct OdeResidual {
  double r1 = 0.0;  // max |xi'' + 2 tau eta' + tau^2 xi - kappa|
  double r2 = 0.0;  // max |eta'' + 2 tau xi' + tau^2 eta|
};

/// Residual of the normal-curve system
///   xi'' + 2 tau eta' + tau^2 xi = kappa,  eta'' + 2 tau xi' + tau^2 eta = 0
/// for jet-evaluable xi(s), eta(s) (callables Jet3 -> Jet3).
template <class XiFn, class EtaFn>
OdeResidual normal_ode_residual(XiFn&& xi, EtaFn&& eta, double kappa, double tau,
                                std::span<const double> grid) {
  OdeResidual out;
  for (double s : grid) {
    const Jet3 x = xi(Jet3::variable(s));
    const Jet3 e = eta(Jet3::variable(s));
    out.r1 = std::max(out.r1, std::fabs(x.d2() + 2.0 * tau * e.d1() + tau * tau * x.v() - kappa));
    out.r2 = std::max(out.r2, std::fabs(e.d2() + 2.0 * tau * x.d1() + tau * tau * e.v()));
  }
  return out;
}

}  // namespace pgc
