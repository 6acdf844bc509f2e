#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "pgcurves/frenet.hpp"

namespace pgc {
namespace {

void expect_vec(const PGVector3& v, const PGVector3& e, double tol = 1e-14) {
  EXPECT_NEAR(v.x, e.x, tol);
  EXPECT_NEAR(v.y, e.y, tol);
  EXPECT_NEAR(v.z, e.z, tol);
}

TEST(CheckAdmissible, Examples) {
  EXPECT_TRUE(check_admissible(CurveDef::analytic("s^2/2", "0", -1, 1, 50)).admissible);
  EXPECT_TRUE(check_admissible(CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 50)).admissible);
  const auto line = check_admissible(CurveDef::analytic("s", "0", -1, 1, 50));
  EXPECT_FALSE(line.admissible);
  EXPECT_EQ(line.violations.size(), 50u);
  EXPECT_TRUE(line.segments.empty());
}

TEST(CheckAdmissible, SignChangeSplitsIntoSegments) {
  // y'' = 1, z'' = s: y''^2 - z''^2 = 1 - s^2 crosses zero at s = 1.
  const auto rep = check_admissible(CurveDef::analytic("s^2/2", "s^3/6", 0, 2, 100));
  EXPECT_FALSE(rep.admissible);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_TRUE(rep.violations[0].crossing);
  EXPECT_NEAR(rep.violations[0].s, 1.0, 1e-12);
  ASSERT_EQ(rep.segments.size(), 2u);
  EXPECT_LT(rep.segments[0].second, 1.0);
  EXPECT_GT(rep.segments[1].first, 1.0);
  EXPECT_EQ(rep.segments[1].second, 2.0);
}

TEST(FrameAt, CoshSinhAtZero) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 10);
  const FrenetData f = frame_at(c, 0.0);
  EXPECT_NEAR(f.kappa, 1.0, 1e-15);
  EXPECT_NEAR(f.tau, 1.0, 1e-15);
  EXPECT_EQ(f.eps, 1);
  expect_vec(f.t, {1, 0, 1});
  expect_vec(f.n, {0, 1, 0});
  expect_vec(f.b, {0, 0, 1});
}

TEST(FrameAt, Parabola) {
  const auto c = CurveDef::analytic("s^2/2", "0", -1, 1, 10);
  for (double s : {-0.5, 0.0, 0.9}) {
    const FrenetData f = frame_at(c, s);
    EXPECT_EQ(f.kappa, 1.0);
    EXPECT_EQ(f.tau, 0.0);
    EXPECT_EQ(f.eps, 1);
    expect_vec(f.n, {0, 1, 0});
    expect_vec(f.b, {0, 0, 1});
  }
}

TEST(FrameAt, TimelikeNormalFlipsEps) {
  // y'' = 0, z'' = 2: y''^2 - z''^2 = -4.
  const auto c = CurveDef::analytic("s", "s^2", -1, 1, 10);
  const FrenetData f = frame_at(c, 0.5);
  EXPECT_EQ(f.eps, -1);
  EXPECT_DOUBLE_EQ(f.kappa, 2.0);
  expect_vec(f.n, {0, 0, 1});
  expect_vec(f.b, {0, -1, 0});
  EXPECT_DOUBLE_EQ(det3(f.t, f.n, f.b), 1.0);
}

TEST(FrameAt, LightlikeNormalThrows) {
  const auto c = CurveDef::analytic("s", "0", -1, 1, 10);
  EXPECT_THROW(frame_at(c, 0.0), NotAdmissible);
  const auto d = CurveDef::analytic("cosh(s)", "cosh(s)", -1, 1, 10);
  EXPECT_THROW(frame_at(d, 0.3), NotAdmissible);
}

TEST(TorsionDet, Examples) {
  EXPECT_NEAR(torsion_det(CurveDef::analytic("cosh(s)", "sinh(s)", -2, 2, 10), 1.0), 1.0, 1e-14);
  EXPECT_EQ(torsion_det(CurveDef::analytic("s^2/2", "0", -2, 2, 10), 2.0), 0.0);
}

TEST(FrenetResiduals, Examples) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -2, 2, 200);
  for (double s : c.grid()) {
    const auto r = frenet_residuals(c, s);
    EXPECT_LE(r.t, 1e-10);
    EXPECT_LE(r.n, 1e-10);
    EXPECT_LE(r.b, 1e-10);
  }
  const auto p = CurveDef::analytic("s^2/2", "0", -2, 2, 20);
  for (double s : p.grid()) {
    const auto r = frenet_residuals(p, s);
    EXPECT_EQ(r.t, 0.0);
    EXPECT_EQ(r.n, 0.0);
    EXPECT_EQ(r.b, 0.0);
  }
}

TEST(FrenetResiduals, SampledCoshSinh) {
  std::vector<double> s, y, z;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    s.push_back(-1.0 + 2.0 * i / (n - 1));
    y.push_back(std::cosh(s.back()));
    z.push_back(std::sinh(s.back()));
  }
  const auto c = CurveDef::sampled(s, s, y, z);
  double worst = 0;
  for (double x : c.grid()) {
    const auto r = frenet_residuals(c, x);
    worst = std::max({worst, r.t, r.n, r.b});
  }
  EXPECT_LE(worst, 1e-5);
}

TEST(FrenetResiduals, SampledTorsionAccuracy) {
  // Spline third derivatives carry rounding noise ~ ulp / h^3, so torsion is
  // only this accurate on a coarse grid (h = 1e-2).
  std::vector<double> s, y, z;
  const int n = 201;
  for (int i = 0; i < n; ++i) {
    s.push_back(-1.0 + 2.0 * i / (n - 1));
    y.push_back(std::cosh(s.back()));
    z.push_back(std::sinh(s.back()));
  }
  const auto c = CurveDef::sampled(s, s, y, z);
  for (double x : c.grid()) {
    const auto f = frame_at(c, x);
    EXPECT_NEAR(f.kappa, 1.0, 1e-7);
    EXPECT_NEAR(f.tau, 1.0, 1e-6);
  }
}

TEST(FrenetProperties, CorpusInvariants) {
  for (const auto& dc : testing::admissible_curves()) {
    SCOPED_TRACE(dc.y + " | " + dc.z);
    const auto c = CurveDef::analytic(dc.y, dc.z, dc.s_min, dc.s_max, 101);
    ASSERT_TRUE(check_admissible(c).admissible);
    for (double s : c.grid()) {
      const FrenetData f = frame_at(c, s);
      EXPECT_NEAR(det3(f.t, f.n, f.b), 1.0, 1e-12);
      EXPECT_NEAR(f.n.y * f.n.y - f.n.z * f.n.z, f.eps, 1e-12);
      EXPECT_NEAR(f.b.y * f.b.y - f.b.z * f.b.z, -f.eps, 1e-12);
      EXPECT_NEAR(f.n.y * f.b.y - f.n.z * f.b.z, 0.0, 1e-12);
      EXPECT_GT(f.kappa, 0.0);
      EXPECT_EQ(f.t.x, 1.0);
      EXPECT_EQ(f.n.x, 0.0);
      EXPECT_EQ(f.b.x, 0.0);
      EXPECT_EQ(causal_character(f.b),
                f.eps > 0 ? CausalCharacter::IsotropicTimelike : CausalCharacter::IsotropicSpacelike);
      const double td = torsion_det(c, s);  // relative to max(1, |tau|)
      EXPECT_NEAR(f.tau, td, 1e-12 * std::max(1.0, std::fabs(td)));
    }
  }
}

TEST(FrenetProperties, SymmetriesOfInvariants) {
  for (const auto& dc : testing::admissible_curves()) {
    SCOPED_TRACE(dc.y + " | " + dc.z);
    const auto c = CurveDef::analytic(dc.y, dc.z, dc.s_min, dc.s_max, 21);
    const auto swapped = CurveDef::analytic(dc.z, dc.y, dc.s_min, dc.s_max, 21);
    const auto mirrored = CurveDef::analytic(dc.y, "-(" + dc.z + ")", dc.s_min, dc.s_max, 21);
    for (double s : c.grid()) {
      const FrenetData f = frame_at(c, s);
      const FrenetData g = frame_at(swapped, s);
      const FrenetData h = frame_at(mirrored, s);
      EXPECT_NEAR(g.kappa, f.kappa, 1e-13 * f.kappa);
      EXPECT_EQ(g.eps, -f.eps);
      EXPECT_NEAR(h.tau, -f.tau, 1e-13 * (1 + std::fabs(f.tau)));
      EXPECT_NEAR(h.kappa, f.kappa, 1e-13 * f.kappa);
    }
  }
}

TEST(Reparametrize, AlreadyGraphForm) {
  const Expr t = Expr::parse("t", "t");
  const auto c = reparametrize_graph(t, Expr::parse("cosh(t)", "t"), Expr::parse("sinh(t)", "t"),
                                     -1, 1, 401);
  EXPECT_TRUE(c.is_sampled());
  EXPECT_EQ(c.s_min(), -1.0);
  EXPECT_EQ(c.s_max(), 1.0);
  const auto exact = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 401);
  for (double s : {-0.8, 0.0, 0.33, 0.9}) {
    const FrenetData a = frame_at(c, s), e = frame_at(exact, s);
    EXPECT_NEAR(a.kappa, e.kappa, 1e-6);
    EXPECT_NEAR(a.tau, e.tau, 1e-6);
  }
}

TEST(Reparametrize, LinearRescale) {
  const auto c = reparametrize_graph(Expr::parse("2*t", "t"), Expr::parse("t", "t"),
                                     Expr::parse("0", "t"), 0, 1, 21);
  EXPECT_EQ(c.s_max(), 2.0);
  for (double s : c.grid()) EXPECT_NEAR(c.position(s).y, s / 2, 1e-12);
  EXPECT_FALSE(check_admissible(c).admissible);
}

TEST(Reparametrize, DecreasingParameter) {
  const auto c = reparametrize_graph(Expr::parse("-t", "t"), Expr::parse("t^2", "t"),
                                     Expr::parse("0", "t"), -1, 2, 31);
  EXPECT_EQ(c.s_min(), -2.0);
  EXPECT_EQ(c.s_max(), 1.0);
  for (double s : c.grid()) EXPECT_NEAR(c.position(s).y, s * s, 1e-12);
}

TEST(Reparametrize, StationaryParameterRejected) {
  const Expr y = Expr::parse("t", "t"), z = Expr::parse("0", "t");
  EXPECT_THROW(reparametrize_graph(Expr::parse("t^3", "t"), y, z, -1, 1, 20), NotAdmissible);
  EXPECT_THROW(reparametrize_graph(Expr::parse("t^3", "t"), y, z, -1, 0.7, 20), NotAdmissible);
  EXPECT_THROW(reparametrize_graph(Expr::parse("t^2", "t"), y, z, -1, 1, 20), NotAdmissible);
}

TEST(Reparametrize, MatchesNativeGraphForm) {
  // x = sinh t  =>  t = asinh s, y = cosh^2 t = 1 + s^2, z = 0.3 asinh s.
  const auto c = reparametrize_graph(Expr::parse("sinh(t)", "t"), Expr::parse("cosh(t)^2", "t"),
                                     Expr::parse("0.3*t", "t"), -1, 1, 201);
  const auto native = CurveDef::analytic("1+s^2", "0.3*log(s+sqrt(1+s^2))", c.s_min(), c.s_max(), 50);
  for (double s : native.grid()) {
    const FrenetData a = frame_at(c, s), e = frame_at(native, s);
    EXPECT_NEAR(a.kappa, e.kappa, 1e-6);
    EXPECT_NEAR(a.tau, e.tau, 1e-6);
    EXPECT_NEAR(a.n.y, e.n.y, 1e-6);
    EXPECT_NEAR(a.b.z, e.b.z, 1e-6);
  }
}

TEST(AnalyzeGrid, ThreadedMatchesSerial) {
  const auto c = CurveDef::analytic("s^2/2", "s^3/6", 0, 2, 334);
  const auto a = analyze_grid(c, kDefaultTolAdm, 1);
  const auto b = analyze_grid(c, kDefaultTolAdm, 4);
  ASSERT_EQ(a.size(), b.size());
  std::size_t missing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].frame.has_value(), b[i].frame.has_value());
    if (!a[i].frame) {
      ++missing;
      continue;
    }
    EXPECT_EQ(a[i].frame->tau, b[i].frame->tau);
    EXPECT_EQ(a[i].residuals.n, b[i].residuals.n);
  }
  EXPECT_EQ(missing, 0u);  // the crossing lies between grid points
}

}  // namespace
}  // namespace pgc
