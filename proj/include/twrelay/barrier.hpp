#pragma once

#include "twrelay/types.hpp"

namespace twr {

/// Which DF region the barrier program describes: min inside the subcarrier
/// sum (per-subcarrier coding) or outside it (joint coding).
enum class BarrierRegion { kPerSubcarrier, kMultiSubcarrier };

struct BarrierResult {
  ResourceAllocation alloc;
  double objective = 0.0;  // barrier iterate R, a lower estimate of the optimum
  double gap_bound = 0.0;  // m / tau at exit
  int newton_steps = 0;
};

/// Maximizes R12 along the ray (R, rho R) by a log-barrier Newton method on
/// the jointly concave program in (powers, t, R). Rates enter through the
/// perspective t log2(1 + q/t), which is concave in (q, t).
BarrierResult barrier_df_solve(BarrierRegion region, double rho, const ChannelState& csi,
                               const PowerBudget& budget, double gap_tol = 1e-9);

}  // namespace twr
