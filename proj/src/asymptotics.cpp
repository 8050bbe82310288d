#include "twrelay/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "twrelay/channel.hpp"

namespace twr {

GainRegion multiplexing_region(Strategy s, int n) {
  if (n < 1) throw ParameterError("n_subcarriers must be positive");
  const double nn = n;
  GainRegion g;
  g.strategy = s;
  g.half_planes = {{-1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}};
  if (s == Strategy::kMscDf || s == Strategy::kPscDf) {
    g.half_planes.push_back({1.0, 2.0, nn});
    g.half_planes.push_back({2.0, 1.0, nn});
  } else {
    g.half_planes.push_back({1.0, 0.0, nn / 2.0});
    g.half_planes.push_back({0.0, 1.0, nn / 2.0});
  }
  return g;
}

std::vector<std::array<double, 2>> region_vertices(const GainRegion& g) {
  const auto& hp = g.half_planes;
  std::vector<std::array<double, 2>> pts;
  auto inside = [&](double x, double y) {
    for (const auto& h : hp) {
      if (h.a * x + h.b * y > h.c + 1e-9 * (1.0 + std::abs(h.c))) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < hp.size(); ++i) {
    for (std::size_t j = i + 1; j < hp.size(); ++j) {
      const double det = hp[i].a * hp[j].b - hp[i].b * hp[j].a;
      if (std::abs(det) < 1e-14) continue;
      const double x = (hp[i].c * hp[j].b - hp[i].b * hp[j].c) / det;
      const double y = (hp[i].a * hp[j].c - hp[i].c * hp[j].a) / det;
      if (!inside(x, y)) continue;
      const bool dup = std::any_of(pts.begin(), pts.end(), [&](const auto& p) {
        return std::abs(p[0] - x) < 1e-9 && std::abs(p[1] - y) < 1e-9;
      });
      if (!dup) pts.push_back({x + 0.0, y + 0.0});
    }
  }
  if (pts.empty()) return pts;
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  cx /= pts.size();
  cy /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
    return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(b[1] - cy, b[0] - cx);
  });
  auto origin = std::find_if(pts.begin(), pts.end(), [](const auto& p) {
    return std::abs(p[0]) < 1e-12 && std::abs(p[1]) < 1e-12;
  });
  if (origin != pts.end()) std::rotate(pts.begin(), origin, pts.end());
  return pts;
}

namespace {

void check_x_above_one(const std::vector<double>& xs) {
  for (double x : xs) {
    if (!(x > 1.0) || !std::isfinite(x)) throw ParameterError("slope grid needs x > 1");
  }
}

}  // namespace

std::vector<SlopePoint> empirical_slope(Strategy s, double rho, const ChannelState& csi,
                                        const PowerBudget& base, const std::vector<double>& x_grid,
                                        const SolverConfig& config, const AfOptions& af) {
  check_x_above_one(x_grid);
  std::vector<SlopePoint> out;
  for (double x : x_grid) {
    const PowerBudget b = scale_budget({base, x});
    const double r = solve_boundary_point(s, rho, csi, b, config, af).rate.r12;
    out.push_back({x, r, r / std::log2(x)});
  }
  return out;
}

std::vector<SlopePoint> equal_power_df_slope(double rho, const ChannelState& csi,
                                             const PowerBudget& base,
                                             const std::vector<double>& x_grid,
                                             const SolverConfig& config) {
  check_x_above_one(x_grid);
  std::vector<SlopePoint> out;
  for (double x : x_grid) {
    const double r = equal_power_df_rate(rho, csi, scale_budget({base, x}), config);
    out.push_back({x, r, r / std::log2(x)});
  }
  return out;
}

std::vector<LowSnrPoint> low_snr_gap(double rho, const ChannelState& csi, const PowerBudget& base,
                                     const std::vector<double>& x_grid,
                                     const SolverConfig& config) {
  std::vector<LowSnrPoint> out;
  for (double x : x_grid) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("SNR scale must be positive");
    const PowerBudget b = scale_budget({base, x});
    LowSnrPoint p;
    p.x = x;
    p.r_cutset = solve_boundary_point_cutset(rho, csi, b, config).rate.r12;
    p.r_df = solve_boundary_point_df(rho, csi, b, config).rate.r12;
    if (p.r_df < kUnderflowRate || p.r_cutset < kUnderflowRate) {
      p.underflow = true;
      p.ratio = 1.0;
    } else {
      p.ratio = p.r_cutset / p.r_df;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace twr
