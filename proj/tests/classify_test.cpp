#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "corpus.hpp"
#include "pgcurves/classify.hpp"
#include "pgcurves/synth.hpp"

namespace pgc {
namespace {

TEST(Decompose, BasisVectors) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 10);
  const FrenetData f = frame_at(c, 0.3);
  const FrameComponents a = decompose(f, f.n);
  EXPECT_NEAR(a.alpha, 0.0, 1e-15);
  EXPECT_NEAR(a.beta, 1.0, 1e-14);
  EXPECT_NEAR(a.gamma, 0.0, 1e-14);
  const FrameComponents b = decompose(f, 2.0 * f.t + 3.0 * f.b);
  EXPECT_NEAR(b.alpha, 2.0, 1e-15);
  EXPECT_NEAR(b.beta, 0.0, 1e-13);
  EXPECT_NEAR(b.gamma, 3.0, 1e-13);
}

TEST(FrameComponents, CoshSinhAtZero) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 10);
  const FrameComponents fc = frame_components(c, 0.0, {});
  EXPECT_NEAR(fc.alpha, 0.0, 1e-15);
  EXPECT_NEAR(fc.beta, 1.0, 1e-15);
  EXPECT_NEAR(fc.gamma, 0.0, 1e-15);
}

TEST(FrameComponents, ReconstructionOnCorpus) {
  const PGVector3 p0{0.4, -1.0, 2.5};
  for (const auto& e : testing::admissible_curves()) {
    const auto c = CurveDef::analytic(e.y, e.z, e.s_min, e.s_max, 40);
    for (double s : c.grid()) {
      const FrenetData f = frame_at(c, s);
      const PGVector3 d = c.position(s) - p0;
      const FrameComponents fc = decompose(f, d);
      const PGVector3 back = fc.alpha * f.t + fc.beta * f.n + fc.gamma * f.b;
      EXPECT_LE(euclidean_norm(back - d), 1e-12 * std::max(1.0, euclidean_norm(d)))
          << e.y << " / " << e.z << " s=" << s;
      EXPECT_EQ(fc.alpha, d.x);
    }
  }
}

TEST(FrameComponents, OriginShiftCovariance) {
  // p0 -> p0 + d e1 moves alpha by -d; (beta, gamma) move by d times the
  // {n, b} components of t - e1 = (0, y', z').
  const double d = 1.7;
  for (const auto& e : testing::admissible_curves()) {
    const auto c = CurveDef::analytic(e.y, e.z, e.s_min, e.s_max, 12);
    for (double s : c.grid()) {
      const FrameComponents a = frame_components(c, s, {0.2, 0.1, -0.3});
      const FrameComponents b = frame_components(c, s, {0.2 + d, 0.1, -0.3});
      const FrenetData f = frame_at(c, s);
      const FrameComponents lift = decompose(f, {0.0, f.t.y, f.t.z});
      EXPECT_NEAR(b.alpha, a.alpha - d, 1e-12);
      EXPECT_NEAR(b.beta, a.beta + d * lift.beta, 1e-11);
      EXPECT_NEAR(b.gamma, a.gamma + d * lift.gamma, 1e-11);
    }
  }
}

TEST(FrameComponents, OriginShiftWhereTangentIsE1) {
  // y = s^2/2, z = s^3/6 has t = (1, 0, 0) at s = 0: only alpha moves.
  const auto c = CurveDef::analytic("s^2/2", "s^3/6", -0.5, 0.5, 11);
  const FrameComponents a = frame_components(c, 0.0, {0.2, 0.1, -0.3});
  const FrameComponents b = frame_components(c, 0.0, {1.9, 0.1, -0.3});
  EXPECT_NEAR(b.alpha, a.alpha - 1.7, 1e-15);
  EXPECT_EQ(b.beta, a.beta);
  EXPECT_EQ(b.gamma, a.gamma);
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, -1, -3, -5};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 1.0, 1e-15);
  EXPECT_LE(f.max_residual, 1e-15);
  const std::vector<double> same{1, 1, 1, 1};
  EXPECT_THROW(fit_line(same, y), DegenerateFit);
}

// Range starts just past s = -m1, where tau vanishes.
RectifyingSynthesis rectifying(double m1, double n1, double kappa) {
  return synth_rectifying(m1, n1, Expr::constant(kappa), -m1 + 0.2, -m1 + 1.2);
}

CurveDef rectifying_curve(double m1, double n1, double kappa) {
  const Trajectory tr = rectifying(m1, n1, kappa).trajectory;
  return tr.to_curve(tr.stride_for(kSampledKnotSpacing));
}

TEST(ClassifyRectifying, SynthesizedUnitCase) {
  const auto c = rectifying_curve(0.0, 1.0, 1.0);
  const RectifyingVerdict v = classify_rectifying(c, {}, kDefaultTolClassifyExact);
  EXPECT_TRUE(v.is_rectifying);
  EXPECT_LE(v.beta_max, 1e-6);
  EXPECT_NEAR(v.m1, 0.0, 1e-6);
  EXPECT_NEAR(v.n1, 1.0, 1e-6);
  EXPECT_LE(std::fabs(v.slope_consistency), 1e-6);
  EXPECT_LE(std::fabs(v.intercept_consistency), 1e-6);
  EXPECT_NEAR(v.a, -1.0, 1e-6);
  EXPECT_EQ(v.binormal_sign, -1);
}

TEST(ClassifyRectifying, CoshSinhIsNotRectifying) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -2, 2, 200);
  const RectifyingVerdict v = classify_rectifying(c, {}, kDefaultTolClassifyExact);
  EXPECT_FALSE(v.is_rectifying);
  EXPECT_NEAR(v.a, 0.0, 1e-12);  // tau / kappa = 1
  EXPECT_NEAR(v.b_coef, 1.0, 1e-12);
  EXPECT_THROW(check_rectifying_properties(c, {}, v, 1e-5), Error);
}

TEST(ClassifyRectifying, ZeroTorsionIsNotRectifying) {
  const auto c = CurveDef::analytic("s^2/2", "0", -1, 1, 50);
  const RectifyingVerdict v = classify_rectifying(c, {}, kDefaultTolClassifyExact);
  EXPECT_FALSE(v.is_rectifying);
  EXPECT_EQ(v.a, 0.0);
}

TEST(ClassifyRectifying, TooFewSamples) {
  const auto c = CurveDef::analytic("s^2/2", "0", -1, 1, 7);
  EXPECT_THROW(classify_rectifying(c, {}, 1e-6), DegenerateFit);
}

TEST(ClassifyRectifying, VerdictStableUnderRefinement) {
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 64);
  const auto a = classify_rectifying(c, {}, 1e-6);
  const auto b = classify_rectifying(c.with_grid(c.s_min(), c.s_max(), 128), {}, 1e-6);
  EXPECT_EQ(a.is_rectifying, b.is_rectifying);
}

TEST(CheckRectifyingProperties, SynthesizedUnitCase) {
  const auto c = rectifying_curve(0.0, 1.0, 1.0);
  const auto v = classify_rectifying(c, {}, 1e-6);
  ASSERT_TRUE(v.is_rectifying);
  const RectifyingProperties r = check_rectifying_properties(c, {}, v, 1e-5);
  EXPECT_TRUE(r.distance_law) << r.distance_residual;
  EXPECT_TRUE(r.tangential_component) << r.tangential_residual;
  EXPECT_TRUE(r.normal_length_constant) << r.normal_length_spread;
  EXPECT_TRUE(r.binormal_constant) << r.binormal_spread;
  EXPECT_NEAR(r.normal_length, 1.0, 1e-6);
  EXPECT_TRUE(r.all());
}

TEST(CheckRectifyingProperties, ShiftedOriginTangentialComponent) {
  // alpha shifts by -5, so the tangential component is s + m1 with m1 = -5. beta picks up
  // 5 * (t - e1) and the shifted-origin verdict is no longer rectifying.
  const auto c = rectifying_curve(0.0, 1.0, 1.0);
  const PGVector3 p0{5, 0, 0};
  const auto v = classify_rectifying(c, p0, 1e-6);
  EXPECT_NEAR(v.m1, -5.0, 1e-6);
  EXPECT_FALSE(v.is_rectifying);
  EXPECT_THROW(check_rectifying_properties(c, p0, v, 1e-5), Error);
  for (double s : c.grid()) {
    EXPECT_NEAR(frame_components(c, s, p0).alpha, s + v.m1, 1e-6);
  }
}

TEST(RectifyingBracket, ConstantAlongSynthesizedCurve) {
  const RectifyingSynthesis syn = rectifying(-0.7, -1.3, 2.0);
  const auto c = syn.trajectory.to_curve(syn.trajectory.stride_for(kSampledKnotSpacing));
  EXPECT_LE(rectifying_bracket_spread(c, {}, -0.7, -1.3), 1e-6);
  EXPECT_LE(conservation_spread(syn.trajectory, -0.7, -1.3), 1e-10);
}

TEST(BestOrigin, RecoversIsotropicShift) {
  // Shifting the curve within the isotropic plane moves the origin that makes it rectifying.
  const RectifyingSynthesis syn = synth_rectifying(0.3, 1.1, Expr::constant(1.5), -0.1, 0.9);
  std::vector<double> s, x, y, z;
  for (std::size_t i = 0; i < syn.trajectory.states.size(); i += 10) {
    const auto& st = syn.trajectory.states[i];
    s.push_back(st.s);
    x.push_back(st.r.x);
    y.push_back(st.r.y + 0.25);
    z.push_back(st.r.z - 0.4);
  }
  const auto c = CurveDef::sampled(s, x, y, z);
  EXPECT_FALSE(classify_rectifying(c, {}, 1e-6).is_rectifying);
  const PGVector3 p0 = best_origin(c, {});
  EXPECT_NEAR(p0.y, 0.25, 1e-7);
  EXPECT_NEAR(p0.z, -0.4, 1e-7);
  EXPECT_TRUE(classify_rectifying(c, p0, 1e-6).is_rectifying);
}

TEST(NormalClosedForm, HandValues) {
  const NormalClosedForm a{1.0, 2.0, {0, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(a.xi(0.7), 0.25);
  EXPECT_DOUBLE_EQ(a.eta(0.7), 0.0);
  const NormalClosedForm b{1.0, 1.0, {1, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(b.xi(0.0), 2.0);
  EXPECT_DOUBLE_EQ(b.eta(0.0), 1.0);
}

TEST(OdeResidual, ClosedFormsSolveSystem) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-1.0 + 0.05 * i);
  for (int k = 0; k < 50; ++k) {
    const NormalClosedForm f{1.0 + 4.0 * std::fabs(u(rng)), 0.2 + 2.0 * u(rng),
                             {u(rng), u(rng), u(rng), u(rng)}};
    const auto r = normal_ode_residual([&](const Jet3& s) { return f.xi(s); },
                                   [&](const Jet3& s) { return f.eta(s); }, f.kappa, f.tau, grid);
    EXPECT_LE(r.r1, 1e-10);
    EXPECT_LE(r.r2, 1e-10);
  }
}

TEST(OdeResidual, TrivialCases) {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto constant = normal_ode_residual([](const Jet3&) { return Jet3(0.25); },
                                        [](const Jet3&) { return Jet3(0.0); }, 1.0, 2.0, grid);
  EXPECT_LE(constant.r1, 1e-15);
  EXPECT_EQ(constant.r2, 0.0);
  const auto zero = normal_ode_residual([](const Jet3&) { return Jet3(0.0); },
                                    [](const Jet3&) { return Jet3(0.0); }, 1.0, 2.0, grid);
  EXPECT_EQ(zero.r1, 1.0);
  EXPECT_EQ(zero.r2, 0.0);
}

TEST(FitNormalSeries, SixParameterRoundTrip) {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-1.0 + 0.02 * i);
  const NormalSeries ser = synth_normal_components(1.0, 1.0, {0.3, -0.2, 0.1, 0.05}, grid);
  const NormalFit f = fit_normal_series(ser.s, ser.xi, ser.eta);
  EXPECT_NEAR(f.kappa0, 1.0, 1e-8);
  EXPECT_NEAR(f.tau0, 1.0, 1e-8);
  EXPECT_NEAR(f.c[0], 0.3, 1e-8);
  EXPECT_NEAR(f.c[1], -0.2, 1e-8);
  EXPECT_NEAR(f.c[2], 0.1, 1e-8);
  EXPECT_NEAR(f.c[3], 0.05, 1e-8);
  EXPECT_LE(f.xi_residual, 1e-10);
}

TEST(FitNormalSeries, ConstantSolution) {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.1 * i);
  const NormalSeries ser = synth_normal_components(1.0, 2.0, {0, 0, 0, 0}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_DOUBLE_EQ(ser.xi[i], 0.25);
    EXPECT_DOUBLE_EQ(ser.eta[i], 0.0);
  }
  const NormalFit f = fit_normal_series(ser.s, ser.xi, ser.eta, 1.0, 2.0);
  for (double c : f.c) EXPECT_NEAR(c, 0.0, 1e-12);
  EXPECT_LE(f.xi_residual, 1e-12);
}

TEST(FitNormalSeries, ZeroTorsion) {
  const std::vector<double> grid{0, 1, 2, 3, 4, 5};
  EXPECT_THROW(synth_normal_components(1.0, 0.0, {0, 0, 0, 0}, grid), ZeroTorsion);
  EXPECT_THROW(fit_normal_series(grid, grid, grid, 1.0, 1e-12), ZeroTorsion);
}

TEST(FitNormalComponents, Preconditions) {
  EXPECT_THROW(fit_normal_components(CurveDef::analytic("s^2/2", "0", -1, 1, 20), {}),
               ZeroTorsion);
  EXPECT_THROW(fit_normal_components(CurveDef::analytic("s^2", "s^3", 1, 2, 20), {}),
               NonConstantInvariants);
}

TEST(FitNormalComponents, ConstantInvariantCurve) {
  // kappa = tau = 1; the fit reproduces the measured beta, gamma.
  const auto c = CurveDef::analytic("cosh(s)", "sinh(s)", -1, 1, 41);
  const NormalFit f = fit_normal_components(c, {});
  EXPECT_NEAR(f.kappa0, 1.0, 1e-12);
  EXPECT_NEAR(f.tau0, 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(f.xi_residual));
  EXPECT_TRUE(std::isfinite(f.eta_residual));
}

}  // namespace
}  // namespace pgc
