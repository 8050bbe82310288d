#include "twrelay/asymptotics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "reference.hpp"
#include "twrelay/channel.hpp"

using namespace twr;

namespace {

void expect_vertices(const GainRegion& g, std::vector<std::array<double, 2>> want) {
  const auto v = region_vertices(g);
  ASSERT_EQ(v.size(), want.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(v[i][0], want[i][0], 1e-12) << i;
    EXPECT_NEAR(v[i][1], want[i][1], 1e-12) << i;
  }
}

}  // namespace

TEST(GainRegion, DecodeForwardPolygon) {
  expect_vertices(multiplexing_region(Strategy::kMscDf, 16),
                  {{0, 0}, {8, 0}, {16.0 / 3, 16.0 / 3}, {0, 8}});
  expect_vertices(multiplexing_region(Strategy::kPscDf, 16),
                  {{0, 0}, {8, 0}, {16.0 / 3, 16.0 / 3}, {0, 8}});
}

TEST(GainRegion, AmplifyForwardSquare) {
  expect_vertices(multiplexing_region(Strategy::kAf, 16), {{0, 0}, {8, 0}, {8, 8}, {0, 8}});
  expect_vertices(multiplexing_region(Strategy::kCutset, 16), {{0, 0}, {8, 0}, {8, 8}, {0, 8}});
}

TEST(GainRegion, ThreeSubcarriers) {
  const auto v = region_vertices(multiplexing_region(Strategy::kMscDf, 3));
  ASSERT_EQ(v.size(), 4u);
  EXPECT_NEAR(v[2][0], 1.0, 1e-12);
  EXPECT_NEAR(v[2][1], 1.0, 1e-12);
}

TEST(GainRegion, DfSymmetricCornerBelowAfForAllN) {
  for (int n = 1; n <= 64; ++n) {
    const auto df = region_vertices(multiplexing_region(Strategy::kMscDf, n));
    const auto af = region_vertices(multiplexing_region(Strategy::kAf, n));
    EXPECT_NEAR(df[2][0], n / 3.0, 1e-12);
    EXPECT_LT(df[2][0], af[2][0]);
    EXPECT_NEAR(af[2][0], n / 2.0, 1e-12);
  }
  EXPECT_THROW(multiplexing_region(Strategy::kAf, 0), ParameterError);
}

TEST(Slope, FlatChannelApproachesDfCorner) {
  const ChannelState c = ref::flat(4, 1.0);
  const PowerBudget base{4, 4, 4};
  const auto s = empirical_slope(Strategy::kMscDf, 1.0, c, base,
                                 {std::exp2(10), std::exp2(20), std::exp2(30)}, {});
  ASSERT_EQ(s.size(), 3u);
  for (const auto& p : s) EXPECT_NEAR(p.slope, p.r12 / std::log2(p.x), 1e-15);
  // Finite-x offset decays like 1 / log2 x.
  EXPECT_LT(std::abs(s[2].slope - 4.0 / 3), std::abs(s[0].slope - 4.0 / 3));
  EXPECT_NEAR(s[1].slope, 4.0 / 3, 0.08 * 4.0 / 3);
}

TEST(Slope, AfAndCutsetApproachHalf) {
  const ChannelState c = ref::flat(4, 1.0);
  const PowerBudget base{4, 4, 4};
  const auto cs = empirical_slope(Strategy::kCutset, 1.0, c, base, {std::exp2(20)}, {});
  EXPECT_NEAR(cs[0].slope, 2.0, 0.05 * 2.0);
  const auto af = empirical_slope(Strategy::kAf, 1.0, c, base, {std::exp2(40)}, {});
  EXPECT_NEAR(af[0].slope, 2.0, 0.05 * 2.0);
}

TEST(Slope, EqualPowerMatchesOptimizedAtHighSnr) {
  const ChannelState c = generate_rayleigh_csi(8, 4, true, 31);
  const PowerBudget base{8, 8, 8};
  const double x = std::exp2(20);
  const double opt = empirical_slope(Strategy::kMscDf, 1.0, c, base, {x}, {})[0].slope;
  const double eq = equal_power_df_slope(1.0, c, base, {x}, {})[0].slope;
  EXPECT_LE(eq, opt + 1e-6);
  EXPECT_LE(std::abs(eq - opt), 0.02 * opt);
}

TEST(Slope, JustAboveOne) {
  const auto s = empirical_slope(Strategy::kMscDf, 1.0, ref::toy(), {1, 1, 1}, {1.0 + 1e-9}, {});
  EXPECT_TRUE(std::isfinite(s[0].slope));
  EXPECT_GE(s[0].slope, 0.0);
}

TEST(Slope, RejectsXAtOrBelowOne) {
  EXPECT_THROW(empirical_slope(Strategy::kMscDf, 1.0, ref::toy(), {1, 1, 1}, {1.0}, {}),
               ParameterError);
  EXPECT_THROW(equal_power_df_slope(1.0, ref::toy(), {1, 1, 1}, {0.5}, {}), ParameterError);
}

TEST(LowSnr, RatioTendsToOneAndIsMonotone) {
  const ChannelState c = generate_rayleigh_csi(8, 4, true, 37);
  const auto pts = low_snr_gap(1.0, c, {8, 8, 8}, {1.0, 0.1, 0.01, 0.001}, {});
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_GE(pts[0].ratio, 1.0 - 1e-9);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].ratio, pts[i - 1].ratio + 1e-6);
    EXPECT_GE(pts[i].ratio, 1.0 - 1e-6);
  }
  EXPECT_LE(pts.back().ratio, 1.02);
  for (const auto& p : pts) EXPECT_FALSE(p.underflow);
}

TEST(LowSnr, UnderflowIsFlagged) {
  const auto pts = low_snr_gap(1.0, ref::toy(), {1, 1, 1}, {1e-300}, {});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_TRUE(pts[0].underflow);
  EXPECT_EQ(pts[0].ratio, 1.0);
  EXPECT_THROW(low_snr_gap(1.0, ref::toy(), {1, 1, 1}, {0.0}, {}), ParameterError);
}
