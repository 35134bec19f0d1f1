#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "clusterlab/errors.hpp"
#include "clusterlab/lattice.hpp"

using namespace clusterlab;

namespace {

std::set<std::array<int, 3>> as_set(const SpectralCluster& c) {
  std::set<std::array<int, 3>> s;
  for (const auto& f : c.freqs()) s.insert({f.k[0], f.k[1], f.k[2]});
  return s;
}

}  // namespace

TEST(Band, FivePointOneHasTwentyVectors) {
  const TorusConfig cfg(2);
  const auto c = enumerate_band(cfg, SpectralBand(5.0, 0.1));
  ASSERT_EQ(c.size(), 20u);
  int on25 = 0;
  int on26 = 0;
  for (const auto& f : c.freqs()) {
    on25 += f.norm_sq == 25;
    on26 += f.norm_sq == 26;
  }
  EXPECT_EQ(on25, 12);
  EXPECT_EQ(on26, 8);
  EXPECT_EQ(count_band(cfg, SpectralBand(5.0, 0.1)), 20);
}

TEST(Band, NoIntegerNormInRangeGivesEmptyCluster) {
  const auto c = enumerate_band(TorusConfig(2), SpectralBand(1.2, 0.2));
  EXPECT_TRUE(c.empty());
  EXPECT_TRUE(brute_force_band_oracle(TorusConfig(2), SpectralBand(1.2, 0.2)).empty());
}

TEST(Band, ThreeDimensionalUnitShell) {
  const auto c = enumerate_band(TorusConfig(3), SpectralBand(1.0, 0.5));
  ASSERT_EQ(c.size(), 18u);
  int on1 = 0;
  for (const auto& f : c.freqs()) on1 += f.norm_sq == 1;
  EXPECT_EQ(on1, 6);
}

TEST(Band, UpperEndpointIsExcludedExactly) {
  // 4.9 + 0.1 is 5 in decimal, so |k| = 5 must stay outside
  const auto c = enumerate_band(TorusConfig(2), SpectralBand(4.9, 0.1));
  for (const auto& f : c.freqs()) EXPECT_LT(f.norm_sq, 25);
  const auto d = enumerate_band(TorusConfig(2), SpectralBand(5.0, 0.01));
  EXPECT_EQ(d.size(), 12u);
}

TEST(Band, OutputIsSortedAndIndependentOfJobs) {
  const TorusConfig cfg(3);
  const SpectralBand band(12.0, 0.3);
  const auto a = enumerate_band(cfg, band, 1);
  const auto b = enumerate_band(cfg, band, 4);
  EXPECT_EQ(a, b);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a[i - 1], a[i]);
}

TEST(Band, MatchesCubeScanInThreeDimensions) {
  const TorusConfig cfg(3);
  const SpectralBand band(10.0, 0.05);
  const auto fast = enumerate_band(cfg, band);
  const auto slow = brute_force_band_oracle(cfg, band);
  EXPECT_EQ(as_set(fast), as_set(slow));
  EXPECT_EQ(fast.size(), 198u);
}

TEST(Band, LargeShrinkingBandCount) {
  EXPECT_EQ(count_band(TorusConfig(2), SpectralBand(1000.0, 0.1)), 716);
}

TEST(Band, DoublingWidthNeverLosesPoints) {
  const TorusConfig cfg(2);
  for (double lambda : {7.0, 31.5, 100.0, 333.3}) {
    for (double eps : {0.01, 0.1, 0.4}) {
      EXPECT_LE(count_band(cfg, SpectralBand(lambda, eps)), count_band(cfg, SpectralBand(lambda, 2 * eps)));
    }
  }
}

TEST(Band, RejectsInvalidParameters) {
  EXPECT_THROW(TorusConfig(1), InvalidConfigError);
  EXPECT_THROW(TorusConfig(kMaxDimension + 1), InvalidConfigError);
  EXPECT_THROW(SpectralBand(0.5, 0.1), InvalidConfigError);
  EXPECT_THROW(SpectralBand(5.0, 0.0), InvalidConfigError);
  EXPECT_THROW(SpectralBand(5.0, 1.5), InvalidConfigError);
  EXPECT_THROW(SpectralBand(std::nan(""), 0.5), InvalidConfigError);
}

TEST(Band, OracleRefusesHugeCubes) {
  EXPECT_THROW(brute_force_band_oracle(TorusConfig(3), SpectralBand(500.0, 0.1), 1000), CapacityError);
}

TEST(Ball, SmallCounts) {
  EXPECT_EQ(count_ball(TorusConfig(2), 0.0).count, 1);
  EXPECT_EQ(count_ball(TorusConfig(2), 5.0).count, 81);
  EXPECT_EQ(count_ball(TorusConfig(3), 1.0).count, 7);
  const auto b = count_ball(TorusConfig(2), 5.0);
  EXPECT_NEAR(b.weyl_remainder, 81 - std::numbers::pi * 25, 1e-9);
}

TEST(Ball, AgreesWithShellSums) {
  const TorusConfig cfg(3);
  const auto hist = shell_histogram(cfg, 0, 400);
  std::int64_t total = 0;
  for (auto v : hist) total += v;
  EXPECT_EQ(total, count_ball(cfg, 20.0).count);
}

TEST(Shell, Multiplicities) {
  EXPECT_EQ(shell_multiplicity(TorusConfig(2), 25), 12);
  EXPECT_EQ(shell_multiplicity(TorusConfig(2), 3), 0);
  EXPECT_EQ(shell_multiplicity(TorusConfig(4), 1), 8);
  EXPECT_EQ(shell_multiplicity(TorusConfig(2), 0), 1);
}

TEST(Shell, HistogramMatchesPointwiseMultiplicity) {
  const TorusConfig cfg(2);
  const auto hist = shell_histogram(cfg, 1000, 1100);
  for (std::int64_t m = 1000; m <= 1100; ++m) {
    EXPECT_EQ(hist[static_cast<std::size_t>(m - 1000)], shell_multiplicity(cfg, m)) << m;
  }
}

TEST(Geometry, UnitBallAndSphere) {
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-14);
}
