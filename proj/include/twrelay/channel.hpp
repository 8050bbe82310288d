#pragma once

#include <cstdint>
#include <utility>

#include "twrelay/types.hpp"

namespace twr {

/// Frequency-selective Rayleigh CSI: M complex Gaussian taps of variance 1/M,
/// N-point DFT, squared magnitude. The generator is std::mt19937_64 with
/// Box-Muller normals built from the raw 64-bit output, so a seed reproduces
/// the same gains on every conforming platform.
ChannelState generate_rayleigh_csi(int n_subcarriers, int n_taps, bool reciprocal,
                                   std::uint64_t seed);

PowerBudget scale_budget(const SnrScale& scale);

/// (mean(g1) * p1 / N, mean(g2) * p2 / N)
std::pair<double, double> average_snr(const ChannelState& csi, const PowerBudget& budget);

/// P = N * 10^(dB/10) per node, taking E[g] = 1.
double budget_from_snr_db(int n_subcarriers, double snr_db);

}  // namespace twr
