#include "twrelay/rate_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference.hpp"

using namespace twr;

namespace {

ResourceAllocation uniform_alloc(std::size_t n, double p, double t) {
  return {std::vector<double>(n, p), std::vector<double>(n, p), std::vector<double>(n, p), t};
}

ResourceAllocation random_alloc(std::size_t n, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.0, 2.0), ut(0.05, 0.95);
  ResourceAllocation a;
  for (std::size_t i = 0; i < n; ++i) {
    a.p1.push_back(u(gen));
    a.p2.push_back(u(gen));
    a.pr.push_back(u(gen));
  }
  a.t = ut(gen);
  return a;
}

}  // namespace

TEST(RateModel, ToyMultipleAccessRates) {
  const MaRates r = ma_rates(uniform_alloc(2, 0.5, 0.5), ref::toy(), 1.0);
  EXPECT_NEAR(r.r1, 2.5, 1e-12);
  // r3 is the sum-rate cap divided by 1 + rho.
  EXPECT_NEAR(r.r3, 0.25 * (std::log2(9.0) + std::log2(19.0)), 1e-12);
  EXPECT_NEAR(2 * r.r3, 3.71, 0.005);
}

TEST(RateModel, ZeroPowerGivesZeroRate) {
  ResourceAllocation a = uniform_alloc(2, 0.5, 0.5);
  a.p1 = {0, 0};
  EXPECT_EQ(ma_rates(a, ref::toy(), 1.0).r1, 0.0);
  a.pr = {0, 0};
  const BcRates b = bc_rates(a, ref::toy(), 1.0);
  EXPECT_EQ(b.r4, 0.0);
  EXPECT_EQ(b.r5, 0.0);
}

TEST(RateModel, SingleSubcarrierByHand) {
  const ChannelState c{{2}, {2}, {2}, {2}};
  const MaRates r = ma_rates(uniform_alloc(1, 0.5, 0.5), c, 2.0);
  EXPECT_NEAR(r.r1, 0.5 * std::log2(3.0), 1e-14);
  EXPECT_NEAR(r.r2, 0.25 * std::log2(3.0), 1e-14);
  EXPECT_NEAR(r.r3, std::log2(5.0) / 6.0, 1e-14);
}

TEST(RateModel, ToyBroadcastRates) {
  const BcRates b = bc_rates(uniform_alloc(2, 0.5, 0.5), ref::toy(), 1.0);
  EXPECT_NEAR(b.r4, 2.5, 1e-12);
  const ChannelState c{{4, 4}, {4, 4}, {4, 4}, {4, 4}};
  const BcRates q = bc_rates(uniform_alloc(2, 0.75, 0.25), c, 1.0);
  EXPECT_NEAR(q.r4, 0.75 * 2 * std::log2(5.0), 1e-12);
}

TEST(RateModel, RejectsTimeShareOutsideUnitInterval) {
  for (double t : {0.0, 1.0, -0.1, 1.5}) {
    EXPECT_THROW(ma_rates(uniform_alloc(2, 0.5, t), ref::toy(), 1.0), DomainError);
    EXPECT_THROW(df_constraints(uniform_alloc(2, 0.5, t), ref::toy()), DomainError);
  }
}

TEST(RateModel, ToyConstraints) {
  const auto a = uniform_alloc(2, 0.5, 0.5);
  const RegionConstraints df = df_constraints(a, ref::toy());
  const double sum_cap = 0.5 * (std::log2(9.0) + std::log2(19.0));
  EXPECT_NEAR(df.cap12, 2.5, 1e-9);
  EXPECT_NEAR(df.cap21, 2.5, 1e-9);
  ASSERT_TRUE(df.cap_sum);
  EXPECT_NEAR(*df.cap_sum, sum_cap, 1e-9);

  const RegionConstraints psc = psc_df_constraints(a, ref::toy());
  EXPECT_NEAR(psc.cap12, 1.5, 1e-9);
  EXPECT_NEAR(psc.cap21, 1.5, 1e-9);
  EXPECT_NEAR(*psc.cap_sum, sum_cap, 1e-9);

  const RegionConstraints cs = cutset_constraints(a, ref::toy());
  EXPECT_NEAR(cs.cap12, 2.5, 1e-9);
  EXPECT_FALSE(cs.cap_sum);
}

TEST(RateModel, ZeroPowersGiveZeroCaps) {
  const auto a = uniform_alloc(2, 0.0, 0.5);
  for (Strategy s : {Strategy::kMscDf, Strategy::kPscDf, Strategy::kCutset, Strategy::kAf}) {
    const RegionConstraints c = constraints_for(s, a, ref::toy());
    EXPECT_EQ(c.cap12, 0.0);
    EXPECT_EQ(c.cap21, 0.0);
    if (c.cap_sum) EXPECT_EQ(*c.cap_sum, 0.0);
  }
}

TEST(RateModel, DfCapsMatchTermByTermEvaluation) {
  std::mt19937 gen(5);
  for (int k = 0; k < 50; ++k) {
    const ChannelState c = ref::random_csi(2, 100 + k, false);
    const ResourceAllocation a = random_alloc(2, gen);
    const auto up = ref::ma(a.p1, a.p2, a.t, c, 1.0);
    const auto dn = ref::bc(a.pr, a.t, c, 1.0);
    const RegionConstraints df = df_constraints(a, c);
    EXPECT_NEAR(df.cap12, std::min(up[0], dn[0]), 1e-12);
    EXPECT_NEAR(df.cap21, std::min(up[1], dn[1]), 1e-12);
    EXPECT_NEAR(*df.cap_sum, 2 * up[2], 1e-12);
  }
}

TEST(RateModel, AfToyEqualPower) {
  // Reference values from tests/oracles/derive_values.py.
  const RegionConstraints c = af_constraints({0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, ref::toy());
  EXPECT_NEAR(c.cap12, 1.0307002723320717, 1e-12);
  EXPECT_NEAR(c.cap21, 0.9515692303737053, 1e-12);
  EXPECT_NEAR(c.cap12, 1.03, 0.005);
  EXPECT_FALSE(c.cap_sum);
  const RegionConstraints z = af_constraints({0.5, 0.5}, {0.5, 0.5}, {0, 0}, ref::toy());
  EXPECT_EQ(z.cap12, 0.0);
  EXPECT_EQ(z.cap21, 0.0);
}

TEST(RateModel, AfLargeRelayPowerLimit) {
  const ChannelState c{{2}, {3}, {2}, {3}};
  const double lim = 0.5 * std::log2(1 + 2 * 0.7 * 2);
  const double near = af_constraints({0.7}, {0.4}, {1e12}, c).cap12;
  EXPECT_NEAR(near, lim, 1e-9);
}

TEST(RateModel, RegionContains) {
  const RegionConstraints c{2.5, 2.5, 3.71};
  EXPECT_TRUE(region_contains(c, {1.0, 1.0}));
  EXPECT_FALSE(region_contains(c, {2.0, 2.0}));
  EXPECT_TRUE(region_contains({1.5, 1.5, 3.71}, {1.5, 1.5}));
  EXPECT_TRUE(region_contains({1.5, 1.5, 3.71}, {1.5 + 5e-10, 1.5}));
  EXPECT_FALSE(region_contains({1.5, 1.5, 3.71}, {1.5 + 2e-9, 1.5}));
  EXPECT_TRUE(region_contains({1.5, 1.5, std::nullopt}, {1.5, 1.5}));
}

TEST(RateModel, MaxRateOnRay) {
  EXPECT_NEAR(max_r12_on_ray({2.5, 2.5, 3.71}, 1.0), 1.855, 1e-12);
  EXPECT_NEAR(max_r12_on_ray({2.5, 2.5, std::nullopt}, 2.0), 1.25, 1e-12);
}

// Properties over random allocations.

TEST(RateModelProperty, PerSubcarrierInsideMultiSubcarrier) {
  std::mt19937 gen(17);
  for (int k = 0; k < 300; ++k) {
    const ChannelState c = ref::random_csi(1 + k % 6, 500 + k, k % 2 == 0);
    const ResourceAllocation a = random_alloc(c.size(), gen);
    const RegionConstraints df = df_constraints(a, c), psc = psc_df_constraints(a, c),
                            cs = cutset_constraints(a, c);
    EXPECT_LE(psc.cap12, df.cap12 + 1e-12);
    EXPECT_LE(psc.cap21, df.cap21 + 1e-12);
    EXPECT_EQ(cs.cap12, df.cap12);
    EXPECT_EQ(cs.cap21, df.cap21);
  }
}

TEST(RateModelProperty, CapsMonotoneInEveryPower) {
  std::mt19937 gen(23);
  for (int k = 0; k < 100; ++k) {
    const ChannelState c = ref::random_csi(3, 900 + k);
    const ResourceAllocation a = random_alloc(3, gen);
    for (Strategy s : {Strategy::kMscDf, Strategy::kPscDf, Strategy::kCutset, Strategy::kAf}) {
      const RegionConstraints base = constraints_for(s, a, c);
      for (int node = 0; node < 3; ++node) {
        for (std::size_t n = 0; n < 3; ++n) {
          ResourceAllocation b = a;
          (node == 0 ? b.p1 : node == 1 ? b.p2 : b.pr)[n] += 0.3;
          const RegionConstraints up = constraints_for(s, b, c);
          // AF caps fall in the other terminal's power via the relay gain.
          if (s == Strategy::kAf && node != 2) {
            if (node == 0) EXPECT_GE(up.cap12, base.cap12 - 1e-12);
            if (node == 1) EXPECT_GE(up.cap21, base.cap21 - 1e-12);
            continue;
          }
          EXPECT_GE(up.cap12, base.cap12 - 1e-12);
          EXPECT_GE(up.cap21, base.cap21 - 1e-12);
          if (base.cap_sum) EXPECT_GE(*up.cap_sum, *base.cap_sum - 1e-12);
        }
      }
    }
  }
}

TEST(RateModelProperty, MidpointConcavityInPowers) {
  std::mt19937 gen(29);
  for (int k = 0; k < 200; ++k) {
    const ChannelState c = ref::random_csi(4, 1300 + k);
    ResourceAllocation a = random_alloc(4, gen), b = random_alloc(4, gen);
    b.t = a.t;
    ResourceAllocation m = a;
    for (std::size_t n = 0; n < 4; ++n) {
      m.p1[n] = 0.5 * (a.p1[n] + b.p1[n]);
      m.p2[n] = 0.5 * (a.p2[n] + b.p2[n]);
      m.pr[n] = 0.5 * (a.pr[n] + b.pr[n]);
    }
    const MaRates ra = ma_rates(a, c, 1.3), rb = ma_rates(b, c, 1.3), rm = ma_rates(m, c, 1.3);
    EXPECT_GE(rm.r1, 0.5 * (ra.r1 + rb.r1) - 1e-12);
    EXPECT_GE(rm.r2, 0.5 * (ra.r2 + rb.r2) - 1e-12);
    EXPECT_GE(rm.r3, 0.5 * (ra.r3 + rb.r3) - 1e-12);
    const BcRates ba = bc_rates(a, c, 1.3), bb = bc_rates(b, c, 1.3), bm = bc_rates(m, c, 1.3);
    EXPECT_GE(bm.r4, 0.5 * (ba.r4 + bb.r4) - 1e-12);
    EXPECT_GE(bm.r5, 0.5 * (ba.r5 + bb.r5) - 1e-12);
  }
}

TEST(RateModel, Log2OnePlusIsAccurateNearZero) {
  EXPECT_NEAR(log2_1p(1e-15) / 1e-15, 1.0 / std::log(2.0), 1e-9);
  EXPECT_NEAR(log2_1p(3.0), 2.0, 1e-15);
}
