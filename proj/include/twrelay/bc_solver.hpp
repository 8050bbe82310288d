#pragma once

#include <vector>

#include "twrelay/rate_model.hpp"
#include "twrelay/types.hpp"

namespace twr {

/// lambda4 = 1 - lambda5; alpha3 prices the relay budget.
struct BcDualPoint {
  double lambda5 = 0.5;
  double alpha3 = 0.0;
};

struct BcSolution {
  double rate = 0.0;
  std::vector<double> pr;
  BcDualPoint dual;
  double dual_value = 0.0;
  double gap = 0.0;
  BcRates rates;
};

/// Per-subcarrier relay power from the stationarity quadratic.
std::vector<double> quadratic_power_allocation(const BcDualPoint& dual, double t, double rho,
                                               const ChannelState& csi);

double alpha3_bound(double lambda5, double rho, const ChannelState& csi);

/// lambda4 r4 + lambda5 r5 - alpha3 (sum pr - PR)
double bc_lagrangian(const BcDualPoint& dual, const std::vector<double>& pr, double t,
                     double rho, const ChannelState& csi, const PowerBudget& budget);

BcSolution solve_bc(double t, double rho, const ChannelState& csi, const PowerBudget& budget,
                    const SolverConfig& config);

}  // namespace twr
