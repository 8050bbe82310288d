#pragma once

#include <string>
#include <vector>

#include "twrelay/bc_solver.hpp"
#include "twrelay/ma_solver.hpp"
#include "twrelay/types.hpp"

namespace twr {

struct BoundaryPoint {
  double rho = 1.0;
  RatePair rate;
  ResourceAllocation alloc;
  double t_star = 0.5;
  Strategy strategy = Strategy::kMscDf;
};

struct SweepFailure {
  double rho = 0.0;
  std::string message;
};

struct RegionBoundary {
  std::vector<BoundaryPoint> points;  // increasing rho
  std::string csi_digest;
  PowerBudget budget;
  Strategy strategy = Strategy::kMscDf;
  std::vector<SweepFailure> failures;
};

/// Single-user water-filling p_n = max(0, mu - t/g_n) spending the whole budget.
std::vector<double> waterfill(const std::vector<double>& gains, double budget, double t_scale);

/// Water level of the allocation above (0 when nothing is allocated).
double water_level(const std::vector<double>& gains, double budget, double t_scale);

BoundaryPoint solve_boundary_point_df(double rho, const ChannelState& csi,
                                      const PowerBudget& budget, const SolverConfig& config);
BoundaryPoint solve_boundary_point_cutset(double rho, const ChannelState& csi,
                                          const PowerBudget& budget, const SolverConfig& config);
BoundaryPoint solve_boundary_point_psc_df(double rho, const ChannelState& csi,
                                          const PowerBudget& budget, const SolverConfig& config);

struct AfOptions {
  bool refine = false;  // cyclic coordinate ascent from equal power
  int max_sweeps = 30;
};

BoundaryPoint solve_boundary_point_af(double rho, const ChannelState& csi,
                                      const PowerBudget& budget, const AfOptions& opts = {});

BoundaryPoint solve_boundary_point(Strategy s, double rho, const ChannelState& csi,
                                   const PowerBudget& budget, const SolverConfig& config,
                                   const AfOptions& af = {});

/// Optimal multiple-access rate of the cut-set bound at fixed t.
double cutset_ma_rate(double t, double rho, const ChannelState& csi, const PowerBudget& budget);

/// DF boundary rate when every node spreads its budget evenly; only t is optimized.
double equal_power_df_rate(double rho, const ChannelState& csi, const PowerBudget& budget,
                           const SolverConfig& config);

/// One boundary point per rho; a failed point is recorded and skipped.
/// jobs <= 0 uses the available hardware concurrency.
RegionBoundary sweep_region(Strategy s, const std::vector<double>& rho_grid,
                            const ChannelState& csi, const PowerBudget& budget,
                            const SolverConfig& config, int jobs = 1, const AfOptions& af = {});

/// n log-spaced values between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// 33 log-spaced ratios in [1/32, 32].
std::vector<double> default_rho_grid();

}  // namespace twr
