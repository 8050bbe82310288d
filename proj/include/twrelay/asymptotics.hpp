#pragma once

#include <array>
#include <vector>

#include "twrelay/region_solver.hpp"
#include "twrelay/types.hpp"

namespace twr {

/// a r12 + b r21 <= c
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct GainRegion {
  Strategy strategy = Strategy::kMscDf;
  std::vector<HalfPlane> half_planes;  // includes r12 >= 0 and r21 >= 0
};

GainRegion multiplexing_region(Strategy s, int n_subcarriers);

/// Corners of the polygon, counter-clockwise starting at the origin.
std::vector<std::array<double, 2>> region_vertices(const GainRegion& g);

struct SlopePoint {
  double x = 0.0;
  double r12 = 0.0;
  double slope = 0.0;  // r12 / log2(x)
};

std::vector<SlopePoint> empirical_slope(Strategy s, double rho, const ChannelState& csi,
                                        const PowerBudget& base, const std::vector<double>& x_grid,
                                        const SolverConfig& config, const AfOptions& af = {});

/// Slope of the DF rate when all nodes use equal power and only t is optimized.
std::vector<SlopePoint> equal_power_df_slope(double rho, const ChannelState& csi,
                                             const PowerBudget& base,
                                             const std::vector<double>& x_grid,
                                             const SolverConfig& config);

inline constexpr double kUnderflowRate = 1e-14;

struct LowSnrPoint {
  double x = 0.0;
  double ratio = 1.0;  // cut-set over DF
  bool underflow = false;
  double r_cutset = 0.0;
  double r_df = 0.0;
};

std::vector<LowSnrPoint> low_snr_gap(double rho, const ChannelState& csi, const PowerBudget& base,
                                     const std::vector<double>& x_grid,
                                     const SolverConfig& config);

}  // namespace twr
