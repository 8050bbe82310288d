#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "twrelay/rate_model.hpp"
#include "twrelay/types.hpp"

namespace twr {

/// Dual variables of the multiple-access subproblem: lambda weights the
/// three rate constraints, alpha prices the two power budgets.
struct MaDualPoint {
  std::array<double, 3> lambda{0.0, 0.0, 1.0};
  std::array<double, 2> alpha{0.0, 0.0};
};

struct PowerSplit {
  std::vector<double> p1;
  std::vector<double> p2;
};

enum class LambdaBranch { kLambda1, kLambda2, kAtLambda0 };
std::string_view to_string(LambdaBranch b);

/// Per-subcarrier maximizer of the Lagrangian for lambda on one of the two
/// edges {lambda2 = 0} or {lambda1 = 0} of the simplex, by the four KKT cases.
PowerSplit kkt_power_allocation(const MaDualPoint& dual, double t, double rho,
                                const ChannelState& csi);

/// Same maximizer for any lambda >= 0 via the cubic in u = t + g1 p1 + g2 p2.
PowerSplit cubic_power_allocation(const MaDualPoint& dual, double t, double rho,
                                  const ChannelState& csi);

/// (sum p1 - P1, sum p2 - P2)
std::array<double, 2> alpha_subgradient(const std::vector<double>& p1,
                                        const std::vector<double>& p2,
                                        const PowerBudget& budget);

std::array<double, 2> alpha_bounds(const std::array<double, 3>& lambda, double rho,
                                   const ChannelState& csi);

/// Lagrangian sum_k lambda_k r_k - sum_i alpha_i (sum p_i - P_i). At the
/// maximizing powers this is an upper bound on the optimal rate.
double ma_lagrangian(const MaDualPoint& dual, const PowerSplit& p, double t, double rho,
                     const ChannelState& csi, const PowerBudget& budget);

/// One central-cut ellipsoid step in two dimensions for minimizing with
/// subgradient g. A is row-major 2x2.
void ellipsoid_step(std::array<double, 2>& center, std::array<double, 4>& shape,
                    const std::array<double, 2>& g);

enum class AllocRule { kStructured, kCubic };

struct InnerOptions {
  AllocRule rule = AllocRule::kStructured;
  /// Keep iterating after the value certificate until the budgets are met.
  bool need_budget = true;
};

struct InnerSolution {
  std::array<double, 2> alpha{0.0, 0.0};
  PowerSplit powers;
  double value = 0.0;       // Lagrangian at the returned alpha
  double best_value = 0.0;  // smallest Lagrangian over all probed alpha
  int iterations = 0;
  bool budget_met = false;
};

/// Minimizes the Lagrangian over alpha >= 0 for fixed lambda.
InnerSolution ellipsoid_inner_solve(const std::array<double, 3>& lambda, double t, double rho,
                                    const ChannelState& csi, const PowerBudget& budget,
                                    const SolverConfig& config, const InnerOptions& opts = {});

/// Branch rule on the rates obtained at lambda = (0,0,1).
LambdaBranch classify_branch(const MaRates& r);

LambdaBranch lambda_branch_test(double t, double rho, const ChannelState& csi,
                                const PowerBudget& budget, const SolverConfig& config);

struct Recovery {
  PowerSplit powers;
  int degenerate = 0;  // subcarriers whose split was not pinned by stationarity
  bool warning = false;
};

/// Picks a primal point among the Lagrangian maximizers at a converged dual.
/// The split is only free when lambda1 = lambda2 = 0; there, tied subcarriers
/// share one split ratio chosen to meet both budgets and maximize the minimum rate.
Recovery recover_primal(const MaDualPoint& dual_star, double t, double rho,
                        const ChannelState& csi, const PowerBudget& budget,
                        const SolverConfig& config);

/// Maximizer of the sum-rate term under both budgets. Enumerates the splits of
/// the subcarriers, ordered by g1/g2, between the terminals, with at most one
/// shared group of equal ratios. Ties in the sum rate go to the larger min rate.
PowerSplit sum_rate_allocation(double t, double rho, const ChannelState& csi,
                               const PowerBudget& budget);

struct MaSolution {
  double rate = 0.0;
  std::vector<double> p1;
  std::vector<double> p2;
  MaDualPoint dual;
  double dual_value = 0.0;
  double gap = 0.0;
  LambdaBranch branch = LambdaBranch::kAtLambda0;
  MaRates rates;
  bool recovery_warning = false;
};

MaSolution solve_ma(double t, double rho, const ChannelState& csi, const PowerBudget& budget,
                    const SolverConfig& config);

}  // namespace twr
