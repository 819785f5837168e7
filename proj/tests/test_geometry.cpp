#include <gtest/gtest.h>

#include <cmath>

#include "droplets/curvature.hpp"
#include "droplets/geometry.hpp"
#include "droplets/trace.hpp"

using namespace droplets;

TEST(Curvature, CircleIsOne) {
  for (double th : {-2.0, 0.0, 1.0, 3.0}) EXPECT_NEAR(curvature_hat(DropletFamily::circle(), th), 1.0, 1e-14);
}

TEST(Curvature, KsvClosedFormsMatchLemma) {
  EXPECT_LT(curvature_closed_form_deviation(DropletFamily::ksv(0.2)), 1e-11);
  EXPECT_LT(curvature_closed_form_deviation(DropletFamily::ksv(0.5)), 1e-11);
  for (double th : {0.1, 1.3, 2.9}) {
    const double want = curvature_hat(DropletFamily::ksv(0.45), th);
    EXPECT_NEAR(ksv_curvature_rational(0.45, std::polar(1.0, th)).real(), want, 1e-11);
    EXPECT_NEAR(ksv_curvature_rational(0.45, std::polar(1.0, th)).imag(), 0.0, 1e-11);
  }
}

TEST(Curvature, TwoPoleClosedFormIsOppositeSign) {
  EXPECT_LT(curvature_closed_form_deviation(DropletFamily::two_pole(0.15)), 1e-11);
  EXPECT_NEAR(two_pole_curvature_closed(0.2, 0.7), -curvature_hat(DropletFamily::two_pole(0.2), 0.7), 1e-12);
  EXPECT_NEAR(two_pole_curvature_rational(0.2, std::polar(1.0, 0.7)).real(), two_pole_curvature_closed(0.2, 0.7), 1e-12);
}

TEST(Curvature, LemmaAgreesWithPolylineCurvature) {
  for (auto f : {DropletFamily::ksv(0.3), DropletFamily::two_pole(0.2), DropletFamily::m_pole(3, 0.25),
                 DropletFamily::mcleod()})
    EXPECT_LT(curvature_numeric_deviation(f, 8192), 1e-5) << f.describe();
}

TEST(Curvature, PropertyTotalCurvatureIsTwoPi) {
  // Lemma curvature is taken per unit arc length; the turning number of a
  // simple boundary is one.
  for (auto f : {DropletFamily::ksv(0.3), DropletFamily::two_pole(0.3), DropletFamily::m_pole(4, 0.3)}) {
    const int n = 4096;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx w = std::polar(1.0, -pi + 2.0 * pi * k / n);
      total += curvature_hat(f, w) * std::abs(phi_prime(f, w)) * 2.0 * pi / n;
    }
    EXPECT_NEAR(std::abs(total), 2.0 * pi, 1e-9) << f.describe();
  }
}

TEST(Trace, ShapeAndEndpoints) {
  const auto t = boundary_trace(DropletFamily::ksv(0.3), 256);
  ASSERT_EQ(t.size(), 257u);
  EXPECT_DOUBLE_EQ(t.thetas.front(), -pi);
  EXPECT_DOUBLE_EQ(t.thetas.back(), pi);
  EXPECT_LT(std::abs(t.points.front() - t.points.back()), 1e-14);
  EXPECT_EQ(t.polyline().points.size(), 256u);
  EXPECT_THROW(boundary_trace(DropletFamily::circle(), 32), std::invalid_argument);
}

TEST(Trace, PinchedTwoPoleHasContactNotCusp) {
  const auto t = boundary_trace(DropletFamily::two_pole(1.0 / 3.0), 1024);
  EXPECT_TRUE(t.degenerate.empty());
  EXPECT_LT(std::abs(phi(DropletFamily::two_pole(1.0 / 3.0), 1.0)), 1e-10);
  EXPECT_LT(std::abs(phi(DropletFamily::two_pole(1.0 / 3.0), -1.0)), 1e-10);
}

TEST(Thresholds, ExactRadicals) {
  EXPECT_NEAR(ksv_convexity_exact, (3.0 - std::sqrt(5.0)) / 2.0, 1e-15);
  EXPECT_NEAR(ksv_univalency_bound, (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(two_pole_convexity_exact, std::sqrt(6.0 * std::sqrt(13.0) - 21.0) / 3.0, 1e-15);
  EXPECT_NEAR(ksv_curvature_numerator(ksv_convexity_exact, 1.0), 0.0, 1e-14);
}

TEST(Thresholds, KsvConvexity) {
  const auto r = convexity_threshold(FamilyTag::ksv);
  EXPECT_NEAR(r.value, ksv_convexity_exact, 1e-12);
  EXPECT_NEAR(r.cross_check, ksv_convexity_exact, 1e-9);
}

TEST(Thresholds, TwoPoleConvexity) {
  const auto r = convexity_threshold(FamilyTag::two_pole);
  EXPECT_NEAR(r.value, two_pole_convexity_exact, 1e-12);
  EXPECT_NEAR(r.cross_check, two_pole_convexity_exact, 1e-9);
}

TEST(Thresholds, MPoleConvexityFrozen) {
  EXPECT_NEAR(convexity_threshold(FamilyTag::m_pole, 3).value, 0.307974981283421, 1e-9);
  EXPECT_NEAR(convexity_threshold(FamilyTag::m_pole, 4).value, 0.356025300641500, 1e-9);
  EXPECT_NEAR(convexity_threshold(FamilyTag::m_pole, 5).value, 0.399520011212809, 1e-9);
  EXPECT_NEAR(convexity_threshold(FamilyTag::m_pole, 2).value, two_pole_convexity_exact, 1e-9);
}

TEST(Thresholds, Univalency) {
  EXPECT_NEAR(univalency_threshold(FamilyTag::ksv).value, ksv_univalency_bound, 1e-6);
  EXPECT_NEAR(univalency_threshold(FamilyTag::two_pole).value, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(univalency_threshold(FamilyTag::m_pole, 3).value, 0.4695928125554685, 1e-6);
  EXPECT_NEAR(univalency_threshold(FamilyTag::m_pole, 4).value, 0.5425996736363490, 1e-6);
}

TEST(Thresholds, MPoleUnivalencyMatchesRadicals) {
  EXPECT_NEAR(univalency_threshold(FamilyTag::m_pole, 3).value, std::cbrt((std::sqrt(2.0) - 1.0) / 4.0), 1e-6);
  EXPECT_NEAR(univalency_threshold(FamilyTag::m_pole, 4).value,
              std::pow((37.0 - 8.0 * std::sqrt(10.0)) / 135.0, 0.25), 1e-6);
}

TEST(Simplicity, Verdicts) {
  EXPECT_EQ(boundary_simplicity(DropletFamily::ksv(0.5)), SimplicityVerdict::simple);
  EXPECT_EQ(boundary_simplicity(DropletFamily::ksv(0.7)), SimplicityVerdict::not_simple);
  EXPECT_EQ(boundary_simplicity(DropletFamily::two_pole(0.3)), SimplicityVerdict::simple);
  EXPECT_EQ(boundary_simplicity(DropletFamily::two_pole(0.35)), SimplicityVerdict::not_simple);
}

TEST(KsvStages, Classification) {
  EXPECT_STREQ(stage_name(ksv_stage(0.2)), "I");
  EXPECT_STREQ(stage_name(ksv_stage(0.5)), "II");
  EXPECT_STREQ(stage_name(ksv_stage(0.65)), "III");
}

TEST(KsvStages, XAtZeroMatchesMap) {
  for (double c : {0.2, 0.5}) EXPECT_NEAR(ksv_x0(c), phi(DropletFamily::ksv(c), 1.0).real(), 1e-14);
  EXPECT_NEAR(ksv_x0(0.5), -0.25, 1e-15);
  EXPECT_NEAR(ksv_a2(0.5), -0.0625, 1e-12);
}

TEST(LineCounts, KsvStageTwoHasFourCrossings) {
  const auto p = vertical_line_profile(FamilyTag::ksv, 0.5, -0.15);
  EXPECT_EQ(p.polyline_count, 4);
  EXPECT_TRUE(p.agree());
  const auto q = vertical_line_profile(FamilyTag::ksv, 0.5, -0.6);
  EXPECT_EQ(q.polyline_count, 2);
  EXPECT_TRUE(q.agree());
}

TEST(LineCounts, TwoPoleTwoCrossings) {
  EXPECT_NEAR(two_pole_x_pi(0.3), phi(DropletFamily::two_pole(0.3), -1.0).real(), 1e-14);
  const auto p = vertical_line_profile(FamilyTag::two_pole, 0.3, 0.1);
  EXPECT_EQ(p.polyline_count, 2);
  EXPECT_TRUE(p.agree());
}

TEST(Width, FrozenValuesAndTraceExtent) {
  const double frozen[] = {0.6553489145659343, 0.5054871608770645, 0.3854414162385023};
  const double cs[] = {0.28, 0.30, 0.32};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(2.0 * two_pole_a_star(cs[i]), frozen[i], 1e-13);
    const auto w = droplet_width(cs[i]);
    EXPECT_TRUE(w.formula_regime);
    EXPECT_LT(w.deviation, 1e-8);
  }
  EXPECT_FALSE(droplet_width(0.2).formula_regime);
}

TEST(Report, KsvStageIncluded) {
  const auto g = geometry_report(FamilyTag::ksv, 2, 0.5);
  EXPECT_EQ(g.stage, "II");
  EXPECT_NEAR(g.convexity.value, ksv_convexity_exact, 1e-12);
}
