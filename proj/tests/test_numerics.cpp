#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "droplets/numerics.hpp"

using namespace droplets;

TEST(IntegrateLoop, ReciprocalGivesTwoPiI) {
  const cplx v = integrate_loop([](cplx w) { return 1.0 / w; }, CircleLoop{0.0, 0.5});
  EXPECT_NEAR(v.real(), 0.0, 1e-14);
  EXPECT_NEAR(v.imag(), 2.0 * pi, 1e-13);
}

TEST(IntegrateLoop, ClockwiseFlipsSign) {
  CircleLoop loop{0.2, 0.3, Orientation::clockwise, 32};
  const cplx v = integrate_loop([](cplx w) { return 1.0 / (w - 0.2); }, loop);
  EXPECT_NEAR(v.imag(), -2.0 * pi, 1e-13);
}

TEST(IntegrateLoop, AnalyticIntegrandVanishes) {
  const cplx v = integrate_loop([](cplx w) { return std::exp(w) * w * w; }, CircleLoop{0.1, 0.7});
  EXPECT_LT(std::abs(v), 1e-13);
}

TEST(IntegrateLoop, NonFiniteValueIsReported) {
  EXPECT_THROW(integrate_loop([](cplx) { return cplx(std::nan(""), 0.0); }, CircleLoop{}), ConvergenceError);
}

TEST(IntegrateLoop, RejectsBadLoops) {
  EXPECT_THROW(integrate_loop([](cplx w) { return w; }, CircleLoop{0.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(integrate_loop([](cplx w) { return w; }, CircleLoop{0.0, 1.0, Orientation::counterclockwise, 48}),
               std::invalid_argument);
}

TEST(Winding, CountsZerosMinusPoles) {
  EXPECT_EQ(winding_count([](cplx w) { return w * w * w; }, CircleLoop{0.0, 0.5}), 3);
  EXPECT_EQ(winding_count([](cplx w) { return 1.0 / (w * w); }, CircleLoop{0.0, 0.5}), -2);
  EXPECT_EQ(winding_count([](cplx w) { return (w - 0.1) * (w + 0.9); }, CircleLoop{0.0, 0.5}), 1);
}

TEST(Winding, ZeroOnContourThrows) {
  EXPECT_THROW(winding_count([](cplx w) { return w - 0.5; }, CircleLoop{0.0, 0.5}), ContourError);
}

TEST(Winding, RectangleEnclosesZero) {
  auto f = [](cplx w) { return (w - cplx(0.1, 0.05)) * (w - cplx(0.1, 0.05)); };
  EXPECT_EQ(unwrap_phase(f, RectanglePath{cplx(-0.3, -0.2), cplx(0.4, 0.3)}).winding, 2);
  EXPECT_EQ(unwrap_phase(f, RectanglePath{cplx(0.2, -0.2), cplx(0.4, 0.3)}).winding, 0);
}

TEST(Bisection, FindsSquareRootOfTwo) {
  EXPECT_NEAR(bisect_threshold([](double x) { return x * x < 2.0; }, 1.0, 2.0, 1e-13), std::sqrt(2.0), 1e-12);
}

TEST(Bisection, InvalidBracketNamesEndpoints) {
  try {
    bisect_threshold([](double x) { return x < 0.0; }, 1.0, 2.0, 1e-6);
    FAIL();
  } catch (const BracketError& e) {
    EXPECT_NE(std::string(e.what()).find("false"), std::string::npos);
  }
}

TEST(Minimize, GoldenAndScan) {
  EXPECT_NEAR(golden_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0).first, 0.3, 1e-6);
  const auto s = scan_minimize([](double t) { return std::cos(3.0 * t); }, -pi, pi);
  EXPECT_NEAR(s.second, -1.0, 1e-12);
}

TEST(CauchyDerivative, MatchesExp) {
  const cplx w(0.2, -0.1);
  EXPECT_LT(std::abs(cauchy_derivative([](cplx z) { return std::exp(z); }, w, 0.05) - std::exp(w)), 1e-13);
}

TEST(Polyline, SquareIsSimple) {
  Polyline p{{cplx(0, 0), cplx(1, 0), cplx(1, 1), cplx(0, 1)}, true};
  EXPECT_TRUE(polyline_is_simple(p, 1e-12).is_simple());
}

TEST(Polyline, FigureEightIsNotSimple) {
  Polyline p{{cplx(0, 0), cplx(1, 1), cplx(1, 0), cplx(0, 1)}, true};
  const auto r = polyline_is_simple(p, 1e-12);
  EXPECT_EQ(r.status, Simplicity::not_simple);
  EXPECT_FALSE(r.intersections.empty());
}

TEST(Polyline, RepeatedClosingPointIsDropped) {
  Polyline p{{cplx(0, 0), cplx(1, 0), cplx(1, 1), cplx(0, 1), cplx(0, 0)}, true};
  EXPECT_TRUE(polyline_is_simple(p, 1e-12).is_simple());
}

TEST(Polyline, ZeroLengthSegmentIsDegenerate) {
  Polyline p{{cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 1)}, true};
  EXPECT_THROW(polyline_is_simple(p, 1e-12), DegenerateError);
}

// Random star-shaped polygons are simple; reversing one vertex pair of a
// convex polygon makes a bow tie.
TEST(Polyline, PropertyStarShapedPolygonsAreSimple) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rad(0.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    Polyline p;
    p.closed = true;
    const int n = 40;
    for (int k = 0; k < n; ++k) p.points.push_back(std::polar(rad(rng), 2.0 * pi * k / n));
    EXPECT_TRUE(polyline_is_simple(p, 1e-12).is_simple());
    std::swap(p.points[5], p.points[25]);
    EXPECT_FALSE(polyline_is_simple(p, 1e-12).is_simple());
  }
}
