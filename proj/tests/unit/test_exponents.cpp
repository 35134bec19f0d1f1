#include <gtest/gtest.h>

#include <cmath>

#include "clusterlab/errors.hpp"
#include "clusterlab/exponents.hpp"

using namespace clusterlab;

TEST(Sigma, KnownValues) {
  for (int n = 2; n <= 8; ++n) EXPECT_DOUBLE_EQ(sigma(n, LpExponent(2.0)), 0.0);
  EXPECT_DOUBLE_EQ(sigma(3, LpExponent::infinity()), 1.0);
  EXPECT_NEAR(sigma(2, LpExponent(6.0)), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(sigma_subcritical_branch(2, LpExponent(6.0)), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(sigma_supercritical_branch(2, LpExponent(6.0)), 1.0 / 6.0, 1e-15);
}

TEST(Alpha, KnownValues) {
  EXPECT_DOUBLE_EQ(alpha(2, LpExponent(2.0)), 1.0);
  EXPECT_NEAR(alpha(2, LpExponent(6.0)), 1.5, 1e-15);
  EXPECT_NEAR(alpha(2, LpExponent(12.0)), 3.0, 1e-14);
  EXPECT_TRUE(std::isinf(alpha(2, LpExponent::infinity())));
  EXPECT_EQ(alpha_reciprocal(2, LpExponent::infinity()), 0.0);
}

TEST(Branches, MeetAtTheCriticalExponent) {
  for (int n = 2; n <= 8; ++n) {
    const LpExponent pc(critical_p(n));
    EXPECT_NEAR(sigma_subcritical_branch(n, pc), sigma_supercritical_branch(n, pc), 1e-14) << n;
    EXPECT_NEAR(alpha_subcritical_branch(n, pc), alpha_supercritical_branch(n, pc), 1e-14) << n;
    EXPECT_NEAR(alpha_reciprocal(n, pc), static_cast<double>(n) / (n + 1), 1e-14) << n;
    EXPECT_NEAR(eps_power(n, pc), 0.0, 1e-14) << n;
  }
}

TEST(Sigma, IsNondecreasingInP) {
  for (int n = 2; n <= 5; ++n) {
    double prev = -1.0;
    for (double p = 2.0; p < 200.0; p *= 1.1) {
      const double s = sigma(n, LpExponent(p));
      EXPECT_GE(s, prev - 1e-15);
      prev = s;
    }
  }
}

TEST(ShrinkRate, KnownValues) {
  EXPECT_NEAR(shrink_rate(2, 1000.0), 0.1, 1e-15);
  for (int n = 2; n <= 8; ++n) EXPECT_DOUBLE_EQ(shrink_rate(n, 1.0), 1.0);
  EXPECT_NEAR(shrink_rate(3, 16.0), 0.25, 1e-15);
}

TEST(CorollaryRhs, InfinityRecoversTheDensityBound) {
  for (double dim : {1.0, 7.0, 100.0}) {
    EXPECT_NEAR(corollary_rhs(2, LpExponent::infinity(), 50.0, 0.3, dim), 50.0 * 0.3, 1e-12);
    EXPECT_NEAR(corollary_rhs(3, LpExponent::infinity(), 20.0, 0.5, dim), 400.0 * 0.5, 1e-10);
  }
}

TEST(CorollaryRhs, CriticalExponentUsesDimensionPowerNOverNPlusOne) {
  const double pc = critical_p(2);
  const double v = corollary_rhs(2, LpExponent(pc), 40.0, 0.2, 27.0);
  EXPECT_NEAR(v, std::pow(40.0, 2.0 / 6.0) * std::pow(27.0, 2.0 / 3.0), 1e-12);
}

TEST(CorollaryRhs, WorkedExample) {
  const double expected = std::pow(100.0, 2.0 * (2.0 * (0.5 - 1.0 / 12.0) - 0.5)) * std::pow(0.1, 0.5) *
                          std::pow(10.0, 1.0 / 3.0);
  EXPECT_NEAR(corollary_rhs(2, LpExponent(12.0), 100.0, 0.1, 10.0), expected, 1e-12 * expected);
}

TEST(CorollaryRhs, RejectsSubcriticalExponents) {
  EXPECT_THROW(corollary_rhs(2, LpExponent(4.0), 10.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(corollary_rhs(2, LpExponent(6.0), 10.0, 0.5, 0.5), DomainError);
}

TEST(LpExponentType, ParsingAndDomain) {
  EXPECT_TRUE(LpExponent::parse("inf").is_infinite());
  EXPECT_DOUBLE_EQ(LpExponent::parse("6").value(), 6.0);
  EXPECT_THROW(LpExponent::parse("six"), DomainError);
  EXPECT_THROW(LpExponent(0.5), DomainError);
  EXPECT_THROW(LpExponent::infinity().value(), DomainError);
  EXPECT_THROW(sigma(2, LpExponent(1.5)), DomainError);
  EXPECT_THROW(sigma(1, LpExponent(4.0)), InvalidConfigError);
}

TEST(EpsRuleType, ParseAndApply) {
  EXPECT_NEAR(EpsRule::parse("shrink").apply(2, 1000.0), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(EpsRule::parse("fixed:0.25").apply(2, 1000.0), 0.25);
  EXPECT_DOUBLE_EQ(EpsRule::parse("0.5").apply(3, 10.0), 0.5);
  EXPECT_NEAR(EpsRule::parse("power:0.5").apply(2, 100.0), 0.1, 1e-15);
  EXPECT_THROW(EpsRule::parse("sometimes"), InvalidConfigError);
}

TEST(Profile, CollectsAllExponents) {
  const auto p = exponent_profile(2, LpExponent(12.0));
  EXPECT_NEAR(p.sigma, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.alpha, 3.0, 1e-14);
  EXPECT_NEAR(p.eps_power, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(p.critical_p, 6.0);
}
