#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "droplets/qdiff.hpp"

using namespace droplets;

TEST(QD, ZeroCountIsEnforced) {
  EXPECT_THROW(build_qd(1.0, {{0.2, 1}}, {{0.0, 4}}), std::invalid_argument);
  EXPECT_NO_THROW(build_qd(1.0, {{0.2, 2}}, {{0.0, 4}}));
  EXPECT_NO_THROW(make_qd_unchecked(1.0, {{0.2, 1}}, {{0.0, 4}}));
}

TEST(QD, RejectsPointsOutsideDisc) {
  EXPECT_THROW(build_qd(1.0, {{1.2, 2}}, {{0.0, 4}}), std::invalid_argument);
  EXPECT_THROW(build_qd(1.0, {{0.2, 2}}, {{cplx(0.0, 1.0), 4}}), std::invalid_argument);
  EXPECT_THROW(build_qd(-1.0, {{0.2, 2}}, {{0.0, 4}}), std::invalid_argument);
}

TEST(QD, KsvAtZeroIsMinusInverseSquare) {
  const auto q = ksv_qd(0.0);
  for (cplx w : {cplx(0.3, 0.2), cplx(-0.7, 0.1)}) EXPECT_LT(std::abs(eval_qd(q, w) + 1.0 / (w * w)), 1e-14);
}

TEST(QD, CanonicalFormsArePositive) {
  for (double c : {0.1, 0.3, 0.5}) {
    const auto k = positivity_on_circle(ksv_qd(c), 4096);
    EXPECT_TRUE(k.positive) << c << " " << k.max_imag_ratio;
    EXPECT_TRUE(positivity_on_circle(two_pole_qd(c * 0.6), 4096).positive);
  }
}

TEST(QD, ReflectionSymmetry) {
  EXPECT_LT(reflection_symmetry(ksv_qd(0.4), 256), 1e-12);
  EXPECT_LT(reflection_symmetry(two_pole_qd(0.25), 256), 1e-12);
}

TEST(QD, UnbalancedCounterexampleFailsPositivity) {
  // one zero short of the balance condition: -w^2 Q picks up a factor 1/w
  const auto q = make_qd_unchecked(1.0, {{0.3, 1}}, {{0.0, 4}});
  EXPECT_FALSE(positivity_on_circle(q, 512).positive);
}

// Random canonical differentials stay positive and symmetric under the
// product and reciprocal constructions.
TEST(QD, PropertyClosureUnderProductAndReciprocal) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rad(0.05, 0.9), ang(-pi, pi), cst(0.5, 2.0);
  std::uniform_int_distribution<int> npoles(1, 3);
  auto random_qd = [&] {
    std::vector<QDPoint> poles{{0.0, 2}}, zeros;
    for (int k = npoles(rng); k > 0; --k) {
      poles.push_back({std::polar(rad(rng), ang(rng)), 1});
      zeros.push_back({std::polar(rad(rng), ang(rng)), 1});
    }
    return make_qd_unchecked(cst(rng), zeros, poles);
  };
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_qd(), b = random_qd();
    EXPECT_TRUE(positivity_on_circle(a, 512, 1e-9).positive);
    EXPECT_LT(reflection_symmetry(a, 64), 1e-10);
    const auto p = qd_product(a, b);
    EXPECT_TRUE(positivity_on_circle(p, 512, 1e-9).positive);
    EXPECT_LT(reflection_symmetry(p, 64), 1e-10);
    const auto r = qd_reciprocal(a);
    EXPECT_TRUE(positivity_on_circle(r, 512, 1e-9).positive);
    EXPECT_LT(reflection_symmetry(r, 64), 1e-10);
  }
}

TEST(QD, OrderAtInfinity) {
  for (const auto& q : {ksv_qd(0.3), two_pole_qd(0.2)}) {
    const int predicted = order_at_infinity(q);
    EXPECT_NEAR(order_at_infinity_sampled(q), predicted, 1e-3);
  }
}

TEST(QD, PoleOnCircleIsRejected) {
  const auto q = make_qd_unchecked(1.0, {}, {{1.0, 2}});
  EXPECT_THROW(positivity_on_circle(q, 16), PoleError);
}
