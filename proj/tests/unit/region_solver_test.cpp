#include "twrelay/region_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "twrelay/bc_solver.hpp"
#include "twrelay/channel.hpp"
#include "twrelay/ma_solver.hpp"
#include "twrelay/oracle.hpp"
#include "twrelay/rate_model.hpp"

using namespace twr;

namespace {

ChannelState swap_terminals(const ChannelState& c) { return {c.g2, c.g1, c.gt2, c.gt1}; }

}  // namespace

TEST(Waterfill, TwoSubcarrierLevel) {
  const auto p = waterfill({1, 15}, 1, 0.5);
  EXPECT_NEAR(water_level({1, 15}, 1, 0.5), 23.0 / 30, 1e-14);
  EXPECT_NEAR(p[0], 8.0 / 30, 1e-14);
  EXPECT_NEAR(p[1], 22.0 / 30, 1e-14);
  EXPECT_NEAR(p[0], 0.2667, 5e-5);
  EXPECT_NEAR(p[1], 0.7333, 5e-5);
}

TEST(Waterfill, FlatAndEmpty) {
  for (double p : waterfill({2, 2, 2, 2}, 3, 0.3)) EXPECT_NEAR(p, 0.75, 1e-15);
  for (double p : waterfill({2, 5}, 0, 0.3)) EXPECT_EQ(p, 0.0);
  for (double p : waterfill({0, 0}, 1, 0.3)) EXPECT_EQ(p, 0.0);
}

TEST(WaterfillProperty, MatchesBisectionReference) {
  for (int k = 0; k < 200; ++k) {
    const ChannelState c = ref::random_csi(1 + k % 12, 7000 + k);
    const double b = 0.1 + (k % 17), tau = 0.05 + 0.9 * ((k * 37) % 100) / 100.0;
    const auto p = waterfill(c.g1, b, tau), q = ref::waterfill(c.g1, b, tau);
    EXPECT_NEAR(ref::sum(p), b, 1e-12 * b);
    for (std::size_t n = 0; n < p.size(); ++n) EXPECT_NEAR(p[n], q[n], 1e-10 * (1 + b));
  }
}

TEST(BoundaryDf, ToyChannelAgainstOracle) {
  // Multi-start local optimum from tests/oracles/derive_values.py.
  const BoundaryPoint p = solve_boundary_point_df(1.0, ref::toy(), {1, 1, 1}, {});
  EXPECT_GE(p.rate.r12, 2.347064094431 - 1e-6);
  const OracleResult o = grid_bruteforce_df(ref::toy(), {1, 1, 1}, 1.0, {200});
  EXPECT_GE(p.rate.r12, o.bound - o.error_bound);
  EXPECT_LE(p.rate.r12, o.upper_bound);
  EXPECT_TRUE(region_contains(df_constraints(p.alloc, ref::toy()), p.rate));
}

TEST(BoundaryDf, SmallRatioIsOneWayRelay) {
  const ChannelState c = ref::random_csi(5, 81, false);
  const PowerBudget b{3, 2, 4};
  const double one_way = [&] {
    auto f = [&](double t) {
      const double up = ref::ma(ref::waterfill(c.g1, b.p1, t), std::vector<double>(5, 0), t, c,
                                1.0)[0];
      const double dn = ref::bc(ref::waterfill(c.gt2, b.pr, 1 - t), t, c, 1.0)[0];
      return std::min(up, dn);
    };
    return f(ref::argmax_1d(f, 1e-4, 1 - 1e-4));
  }();
  const BoundaryPoint p = solve_boundary_point_df(1e-6, c, b, {});
  EXPECT_NEAR(p.rate.r12, one_way, 1e-5);
}

TEST(BoundaryDf, TerminalSwapSymmetry) {
  ChannelState c = ref::random_csi(6, 83);
  const PowerBudget b{5, 5, 5};
  const double a = solve_boundary_point_df(1.0, c, b, {}).rate.r12;
  const double s = solve_boundary_point_df(1.0, swap_terminals(c), b, {}).rate.r12;
  EXPECT_NEAR(a, s, 1e-6);
}

TEST(BoundaryDf, RatioAndMembership) {
  const ChannelState c = generate_rayleigh_csi(8, 4, true, 21);
  for (double rho : {0.1, 1.0, 7.0}) {
    const BoundaryPoint p = solve_boundary_point_df(rho, c, {8, 8, 8}, {});
    EXPECT_LE(std::abs(p.rate.r21 - rho * p.rate.r12), 1e-6 * std::max(1.0, p.rate.r12));
    EXPECT_TRUE(region_contains(df_constraints(p.alloc, c), p.rate));
    p.alloc.validate(8, {8, 8, 8}, 1e-9);
  }
}

TEST(BoundaryDf, RejectsNonPositiveRatio) {
  EXPECT_THROW(solve_boundary_point_df(0.0, ref::toy(), {1, 1, 1}, {}), ParameterError);
  EXPECT_THROW(solve_boundary_point_cutset(-1.0, ref::toy(), {1, 1, 1}, {}), ParameterError);
}

TEST(BoundaryDf, StarvedSolverNamesTheProbe) {
  SolverConfig cfg;
  cfg.max_iters = 1;
  try {
    solve_boundary_point_df(1.0, ref::toy(), {1, 1, 1}, cfg);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("probe t="), std::string::npos);
  }
}

TEST(Cutset, SingleSubcarrierClosedForm) {
  const ChannelState c{{2.5}, {0.7}, {1.1}, {3.0}};
  const PowerBudget b{2, 3, 1};
  for (double t : {0.2, 0.5, 0.8}) {
    for (double rho : {0.5, 2.0}) {
      const double expect = std::min(t * std::log2(1 + 2.5 * 2 / t),
                                     t / rho * std::log2(1 + 0.7 * 3 / t));
      EXPECT_NEAR(cutset_ma_rate(t, rho, c, b), expect, 1e-12);
    }
  }
}

TEST(Cutset, DominatesDfOnToy) {
  for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double df = solve_boundary_point_df(rho, ref::toy(), {1, 1, 1}, {}).rate.r12;
    const double cs = solve_boundary_point_cutset(rho, ref::toy(), {1, 1, 1}, {}).rate.r12;
    EXPECT_GE(cs, df - 1e-6) << rho;
  }
}

TEST(Cutset, OptimalTimeShareBalancesPhases) {
  ChannelState c = ref::random_csi(6, 87);
  c.g2 = c.g1;
  c.gt1 = c.g1;
  c.gt2 = c.g1;
  const PowerBudget b{6, 6, 6};
  const BoundaryPoint p = solve_boundary_point_cutset(1.0, c, b, {});
  const double ma = cutset_ma_rate(p.t_star, 1.0, c, b);
  const double bc = solve_bc(p.t_star, 1.0, c, b, {}).rate;
  // The two curves cross with slopes of order N; t is located to 1e-6.
  EXPECT_NEAR(ma, bc, 1e-6 * 10 * c.size());
}

TEST(PerSubcarrier, NeverAboveMultiSubcarrier) {
  for (int seed = 1; seed <= 4; ++seed) {
    const ChannelState c = generate_rayleigh_csi(8, 4, true, 400 + seed);
    for (double rho : {0.5, 1.0, 2.0}) {
      const double psc = solve_boundary_point_psc_df(rho, c, {8, 8, 8}, {}).rate.r12;
      const double msc = solve_boundary_point_df(rho, c, {8, 8, 8}, {}).rate.r12;
      EXPECT_LE(psc, msc + 1e-6);
    }
  }
}

TEST(PerSubcarrier, ToyFixedAllocationCap) {
  const ResourceAllocation a{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, 0.5};
  EXPECT_NEAR(psc_df_constraints(a, ref::toy()).cap12, 1.5, 1e-12);
}

TEST(Af, EqualPowerToy) {
  const BoundaryPoint p = solve_boundary_point_af(1.0, ref::toy(), {1, 1, 1}, {});
  EXPECT_NEAR(p.rate.r12, 0.9515692303737053, 1e-12);
  EXPECT_DOUBLE_EQ(p.t_star, 0.5);
  const BoundaryPoint q = solve_boundary_point_af(0.5, ref::toy(), {1, 1, 1}, {});
  EXPECT_NEAR(q.rate.r12, 1.0307002723320717, 1e-12);
  EXPECT_NEAR(q.rate.r21, 0.5 * q.rate.r12, 1e-15);
}

TEST(Af, RefinementNeverHurts) {
  for (int seed = 1; seed <= 6; ++seed) {
    const ChannelState c = generate_rayleigh_csi(6, 3, seed % 2 == 0, 500 + seed);
    for (double rho : {0.3, 1.0, 3.0}) {
      const double eq = solve_boundary_point_af(rho, c, {6, 6, 6}, {}).rate.r12;
      const BoundaryPoint r = solve_boundary_point_af(rho, c, {6, 6, 6}, {true, 30});
      EXPECT_GE(r.rate.r12, eq - 1e-15);
      r.alloc.validate(6, {6, 6, 6}, 1e-9);
    }
  }
}

TEST(Sweep, SinglePointMatchesDirectSolve) {
  const RegionBoundary r = sweep_region(Strategy::kMscDf, {1.0}, ref::toy(), {1, 1, 1}, {}, 1);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.points[0].rate.r12,
            solve_boundary_point_df(1.0, ref::toy(), {1, 1, 1}, {}).rate.r12);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_FALSE(r.csi_digest.empty());
}

TEST(Sweep, MirroredRatiosOnSymmetricInstance) {
  ChannelState c = ref::random_csi(4, 89);
  c.g2 = c.g1;
  c.gt2 = c.gt1;
  const auto grid = log_grid(0.25, 4.0, 5);
  for (Strategy s : {Strategy::kMscDf, Strategy::kCutset}) {
    const RegionBoundary r = sweep_region(s, grid, c, {4, 4, 4}, {}, 2);
    ASSERT_EQ(r.points.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& a = r.points[i].rate;
      const auto& b = r.points[4 - i].rate;
      EXPECT_NEAR(a.r12, b.r21, 1e-5);
      EXPECT_NEAR(a.r21, b.r12, 1e-5);
    }
  }
}

TEST(Sweep, DefaultGrid) {
  const auto g = default_rho_grid();
  ASSERT_EQ(g.size(), 33u);
  EXPECT_DOUBLE_EQ(g.front(), 1.0 / 32);
  EXPECT_DOUBLE_EQ(g[16], 1.0);
  EXPECT_DOUBLE_EQ(g.back(), 32.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i] * g[32 - i], 1.0);
}

TEST(Sweep, RejectsBadGrids) {
  EXPECT_THROW(sweep_region(Strategy::kAf, {}, ref::toy(), {1, 1, 1}, {}), ParameterError);
  EXPECT_THROW(sweep_region(Strategy::kAf, {1, 1}, ref::toy(), {1, 1, 1}, {}), ParameterError);
  EXPECT_THROW(sweep_region(Strategy::kAf, {2, 1}, ref::toy(), {1, 1, 1}, {}), ParameterError);
  EXPECT_THROW(sweep_region(Strategy::kAf, {-1, 1}, ref::toy(), {1, 1, 1}, {}), ParameterError);
}

TEST(Sweep, RecordsFailuresAndContinues) {
  SolverConfig cfg;
  cfg.max_iters = 1;
  const RegionBoundary r =
      sweep_region(Strategy::kMscDf, {0.5, 1.0, 2.0}, ref::toy(), {1, 1, 1}, cfg, 2);
  EXPECT_TRUE(r.points.empty());
  ASSERT_EQ(r.failures.size(), 3u);
  EXPECT_EQ(r.failures[1].rho, 1.0);
}

TEST(Sweep, IndependentOfWorkerCount) {
  const ChannelState c = generate_rayleigh_csi(6, 3, true, 91);
  const auto grid = log_grid(0.5, 2.0, 4);
  const RegionBoundary a = sweep_region(Strategy::kMscDf, grid, c, {6, 6, 6}, {}, 1);
  const RegionBoundary b = sweep_region(Strategy::kMscDf, grid, c, {6, 6, 6}, {}, 3);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].rate.r12, b.points[i].rate.r12);
    EXPECT_EQ(a.points[i].alloc.p1, b.points[i].alloc.p1);
  }
}

// Properties over random instances.

class RegionProperty : public ::testing::TestWithParam<int> {};

TEST_P(RegionProperty, ContainmentAndBudgetMonotonicity) {
  const int seed = GetParam();
  const ChannelState c = generate_rayleigh_csi(8, 4, true, 600 + seed);
  const double p = budget_from_snr_db(8, 10.0 * (seed % 3));
  const PowerBudget b{p, p, p}, b2{2 * p, 2 * p, 2 * p};
  for (double rho : {0.2, 1.0, 5.0}) {
    const BoundaryPoint msc = solve_boundary_point_df(rho, c, b, {});
    const double psc = solve_boundary_point_psc_df(rho, c, b, {}).rate.r12;
    const double cs = solve_boundary_point_cutset(rho, c, b, {}).rate.r12;
    EXPECT_LE(psc, msc.rate.r12 + 1e-6);
    EXPECT_LE(msc.rate.r12, cs + 1e-6);
    EXPECT_LE(std::abs(msc.rate.r21 - rho * msc.rate.r12), 1e-6 * std::max(1.0, msc.rate.r12));
    EXPECT_GE(solve_boundary_point_df(rho, c, b2, {}).rate.r12, msc.rate.r12 - 1e-9);
  }
}

TEST_P(RegionProperty, TimeShareObjectiveIsUnimodal) {
  const int seed = GetParam();
  const ChannelState c = generate_rayleigh_csi(4, 2, seed % 2 == 0, 700 + seed);
  const double p = budget_from_snr_db(4, 5.0 * (seed % 5));
  const PowerBudget b{p, p, p};
  const double rho = 0.5 + 0.25 * (seed % 7);
  std::vector<double> v;
  for (int k = 1; k <= 100; ++k) {
    const double t = k / 101.0;
    v.push_back(std::min(solve_ma(t, rho, c, b, {}).rate, solve_bc(t, rho, c, b, {}).rate));
  }
  // Rises then falls, up to 1e-7.
  const std::size_t peak = std::max_element(v.begin(), v.end()) - v.begin();
  for (std::size_t i = 1; i <= peak; ++i) EXPECT_GE(v[i], v[i - 1] - 1e-7) << i;
  for (std::size_t i = peak + 1; i < v.size(); ++i) EXPECT_LE(v[i], v[i - 1] + 1e-7) << i;
}

INSTANTIATE_TEST_SUITE_P(Random, RegionProperty, ::testing::Range(1, 21));
