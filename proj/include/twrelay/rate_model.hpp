#pragma once

#include <cmath>
#include <vector>

#include "twrelay/types.hpp"

namespace twr {

/// log2(1 + x), accurate for x near zero.
inline double log2_1p(double x) { return std::log1p(x) * 1.4426950408889634; }

struct MaRates {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

struct BcRates {
  double r4 = 0.0;
  double r5 = 0.0;
};

/// Weighted multiple-access rates; r2 carries the 1/rho weight and r3 the 1/(rho+1).
MaRates ma_rates(const ResourceAllocation& alloc, const ChannelState& csi, double rho);
/// Weighted broadcast rates; r5 carries the 1/rho weight.
BcRates bc_rates(const ResourceAllocation& alloc, const ChannelState& csi, double rho);

/// Same rates from raw vectors, skipping allocation validation (hot path).
MaRates ma_rates(const std::vector<double>& p1, const std::vector<double>& p2, double t,
                 const ChannelState& csi, double rho);
BcRates bc_rates(const std::vector<double>& pr, double t, const ChannelState& csi, double rho);

RegionConstraints df_constraints(const ResourceAllocation& alloc, const ChannelState& csi);
RegionConstraints psc_df_constraints(const ResourceAllocation& alloc, const ChannelState& csi);
RegionConstraints cutset_constraints(const ResourceAllocation& alloc, const ChannelState& csi);
/// Time share is fixed at 0.5; amplification a_n = pR_n / (p1_n g1_n + p2_n g2_n + 1).
RegionConstraints af_constraints(const std::vector<double>& p1, const std::vector<double>& p2,
                                 const std::vector<double>& pr, const ChannelState& csi);

RegionConstraints constraints_for(Strategy s, const ResourceAllocation& alloc,
                                  const ChannelState& csi);

/// Largest R12 with (R12, rho R12) inside the region.
double max_r12_on_ray(const RegionConstraints& c, double rho);

inline constexpr double kMembershipTol = 1e-9;

bool region_contains(const RegionConstraints& c, const RatePair& rate);

}  // namespace twr
