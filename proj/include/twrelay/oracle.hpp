#pragma once

#include <array>
#include <vector>

#include "twrelay/bc_solver.hpp"
#include "twrelay/ma_solver.hpp"
#include "twrelay/types.hpp"

namespace twr {

struct GridSpec {
  int points_per_axis = 200;
};

struct OracleResult {
  double bound = 0.0;        // best rate found on the grid (achievable)
  double upper_bound = 0.0;  // certified bound on the continuous optimum
  double error_bound = 0.0;  // upper_bound - bound
  ResourceAllocation alloc;  // grid argmax
  double wall_seconds = 0.0;
};

/// Exhaustive search for N <= 2: t on the centers of n-1 equal cells, the
/// first subcarrier's power on P k/(n-1), the second subcarrier takes the rest.
/// For msc-df and cutset the two phases decouple at fixed t; psc-df is a
/// full four-dimensional enumeration.
OracleResult grid_bruteforce_df(const ChannelState& csi, const PowerBudget& budget, double rho,
                                const GridSpec& grid, Strategy s = Strategy::kMscDf);

struct KktReport {
  double stationarity = 0.0;
  double infeasibility = 0.0;
  double slackness = 0.0;
  double simplex_deviation = 0.0;
};

/// Residuals of the multiple-access optimality conditions at (p, dual).
KktReport kkt_residuals(const std::vector<double>& p1, const std::vector<double>& p2,
                        const MaDualPoint& dual, double t, double rho, const ChannelState& csi,
                        const PowerBudget& budget);

/// Same for the broadcast phase.
KktReport bc_kkt_residuals(const std::vector<double>& pr, const BcDualPoint& dual, double t,
                           double rho, const ChannelState& csi, const PowerBudget& budget);

struct ScanResult {
  double best_value = 0.0;  // smallest dual bound over the lambda grid
  std::array<double, 3> best_lambda{0.0, 0.0, 1.0};
  int points = 0;
};

/// Minimizes the dual bound over a uniform grid on the whole lambda simplex,
/// solving the alpha problem with the cubic allocation at every grid point.
ScanResult simplex_dual_scan(double t, double rho, const ChannelState& csi,
                             const PowerBudget& budget, int resolution,
                             const SolverConfig& config);

}  // namespace twr
