#include "twrelay/region_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "twrelay/barrier.hpp"
#include "twrelay/detail/golden.hpp"
#include "twrelay/io.hpp"
#include "twrelay/parallel.hpp"
#include "twrelay/rate_model.hpp"

namespace twr {
namespace {

void check_inputs(double rho, const ChannelState& csi, const PowerBudget& budget) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be positive");
  csi.validate();
  budget.validate();
}

std::string at_t(const std::string& what, double t) {
  std::ostringstream s;
  s.precision(12);
  s << what << " (probe t=" << t << ")";
  return s.str();
}

// Outer search shared by DF and the cut-set bound. ma/bc return the phase
// rate plus the powers they chose.
template <class Ma, class Bc>
BoundaryPoint outer_t_search(Strategy s, double rho, const SolverConfig& config, Ma&& ma,
                             Bc&& bc) {
  struct Probe {
    double value;
    std::vector<double> p1, p2, pr;
  };
  std::map<double, Probe> cache;
  auto eval = [&](double t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second.value;
    Probe p;
    try {
      double rm, rb;
      std::tie(rm, p.p1, p.p2) = ma(t);
      std::tie(rb, p.pr) = bc(t);
      p.value = std::min(rm, rb);
    } catch (const SolverError& e) {
      throw SolverError(at_t(e.what(), t));
    } catch (const DegenerateDualError& e) {
      throw DegenerateDualError(at_t(e.what(), t));
    }
    const double v = p.value;
    cache.emplace(t, std::move(p));
    return v;
  };
  const auto [t_star, best] =
      detail::golden_max(eval, config.t_margin, 1.0 - config.t_margin, config.t_tol);
  const Probe& p = cache.at(t_star);
  BoundaryPoint bp;
  bp.rho = rho;
  bp.strategy = s;
  bp.t_star = t_star;
  bp.alloc = {p.p1, p.p2, p.pr, t_star};
  bp.rate = {best, rho * best};
  return bp;
}

double af_objective(const std::vector<double>& p1, const std::vector<double>& p2,
                    const std::vector<double>& pr, const ChannelState& csi, double rho) {
  return max_r12_on_ray(af_constraints(p1, p2, pr, csi), rho);
}

}  // namespace

std::vector<double> waterfill(const std::vector<double>& gains, double budget, double t_scale) {
  const double mu = water_level(gains, budget, t_scale);
  std::vector<double> p(gains.size(), 0.0);
  if (mu <= 0.0) return p;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] > 0.0) p[i] = std::max(0.0, mu - t_scale / gains[i]);
  }
  return p;
}

double water_level(const std::vector<double>& gains, double budget, double t_scale) {
  if (!(t_scale > 0.0)) throw ParameterError("water-filling scale must be positive");
  if (!(budget > 0.0)) return 0.0;
  std::vector<double> floors;
  for (double g : gains) {
    if (g > 0.0) floors.push_back(t_scale / g);
  }
  if (floors.empty()) return 0.0;
  std::sort(floors.begin(), floors.end());
  double acc = 0.0;
  double mu = 0.0;
  for (std::size_t k = 0; k < floors.size(); ++k) {
    acc += floors[k];
    mu = (budget + acc) / static_cast<double>(k + 1);
    if (k + 1 == floors.size() || mu <= floors[k + 1]) break;
  }
  return mu;
}

double cutset_ma_rate(double t, double rho, const ChannelState& csi, const PowerBudget& budget) {
  const auto p1 = waterfill(csi.g1, budget.p1, t);
  const auto p2 = waterfill(csi.g2, budget.p2, t);
  const MaRates r = ma_rates(p1, p2, t, csi, rho);
  return std::min(r.r1, r.r2);
}

BoundaryPoint solve_boundary_point_df(double rho, const ChannelState& csi,
                                      const PowerBudget& budget, const SolverConfig& config) {
  check_inputs(rho, csi, budget);
  config.validate();
  return outer_t_search(
      Strategy::kMscDf, rho, config,
      [&](double t) {
        MaSolution m = solve_ma(t, rho, csi, budget, config);
        return std::make_tuple(m.rate, std::move(m.p1), std::move(m.p2));
      },
      [&](double t) {
        BcSolution b = solve_bc(t, rho, csi, budget, config);
        return std::make_tuple(b.rate, std::move(b.pr));
      });
}

BoundaryPoint solve_boundary_point_cutset(double rho, const ChannelState& csi,
                                          const PowerBudget& budget, const SolverConfig& config) {
  check_inputs(rho, csi, budget);
  config.validate();
  return outer_t_search(
      Strategy::kCutset, rho, config,
      [&](double t) {
        auto p1 = waterfill(csi.g1, budget.p1, t);
        auto p2 = waterfill(csi.g2, budget.p2, t);
        const MaRates r = ma_rates(p1, p2, t, csi, rho);
        return std::make_tuple(std::min(r.r1, r.r2), std::move(p1), std::move(p2));
      },
      [&](double t) {
        BcSolution b = solve_bc(t, rho, csi, budget, config);
        return std::make_tuple(b.rate, std::move(b.pr));
      });
}

BoundaryPoint solve_boundary_point_psc_df(double rho, const ChannelState& csi,
                                          const PowerBudget& budget, const SolverConfig& config) {
  check_inputs(rho, csi, budget);
  config.validate();
  const BarrierResult res = barrier_df_solve(BarrierRegion::kPerSubcarrier, rho, csi, budget);
  BoundaryPoint bp;
  bp.rho = rho;
  bp.strategy = Strategy::kPscDf;
  bp.alloc = res.alloc;
  bp.t_star = res.alloc.t;
  const double r12 = max_r12_on_ray(psc_df_constraints(res.alloc, csi), rho);
  bp.rate = {r12, rho * r12};
  return bp;
}

BoundaryPoint solve_boundary_point_af(double rho, const ChannelState& csi,
                                      const PowerBudget& budget, const AfOptions& opts) {
  check_inputs(rho, csi, budget);
  const std::size_t n = csi.size();
  std::vector<std::vector<double>> p{std::vector<double>(n, budget.p1 / n),
                                     std::vector<double>(n, budget.p2 / n),
                                     std::vector<double>(n, budget.pr / n)};
  double best = af_objective(p[0], p[1], p[2], csi, rho);
  if (opts.refine && n > 1) {
    double step = 0.5;
    for (int sweep = 0; sweep < opts.max_sweeps && step >= 1e-4; ++sweep) {
      bool improved = false;
      for (auto& node : p) {
        for (std::size_t from = 0; from < n; ++from) {
          for (std::size_t to = 0; to < n; ++to) {
            if (to == from || node[from] <= 0.0) continue;
            const double d = step * node[from];
            node[from] -= d;
            node[to] += d;
            const double v = af_objective(p[0], p[1], p[2], csi, rho);
            if (v > best) {
              best = v;
              improved = true;
            } else {
              node[from] += d;
              node[to] -= d;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  BoundaryPoint bp;
  bp.rho = rho;
  bp.strategy = Strategy::kAf;
  bp.alloc = {p[0], p[1], p[2], 0.5};
  bp.t_star = 0.5;
  bp.rate = {best, rho * best};
  return bp;
}

BoundaryPoint solve_boundary_point(Strategy s, double rho, const ChannelState& csi,
                                   const PowerBudget& budget, const SolverConfig& config,
                                   const AfOptions& af) {
  switch (s) {
    case Strategy::kMscDf: return solve_boundary_point_df(rho, csi, budget, config);
    case Strategy::kPscDf: return solve_boundary_point_psc_df(rho, csi, budget, config);
    case Strategy::kCutset: return solve_boundary_point_cutset(rho, csi, budget, config);
    case Strategy::kAf: return solve_boundary_point_af(rho, csi, budget, af);
  }
  throw ParameterError("unknown strategy");
}

double equal_power_df_rate(double rho, const ChannelState& csi, const PowerBudget& budget,
                           const SolverConfig& config) {
  check_inputs(rho, csi, budget);
  const std::size_t n = csi.size();
  ResourceAllocation a{std::vector<double>(n, budget.p1 / n),
                       std::vector<double>(n, budget.p2 / n),
                       std::vector<double>(n, budget.pr / n), 0.5};
  return detail::golden_max(
             [&](double t) {
               a.t = t;
               return max_r12_on_ray(df_constraints(a, csi), rho);
             },
             config.t_margin, 1.0 - config.t_margin, config.t_tol)
      .second;
}

RegionBoundary sweep_region(Strategy s, const std::vector<double>& rho_grid,
                            const ChannelState& csi, const PowerBudget& budget,
                            const SolverConfig& config, int jobs, const AfOptions& af) {
  if (rho_grid.empty()) throw ParameterError("rho grid must be nonempty");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0) || !std::isfinite(rho_grid[i])) {
      throw ParameterError("rho grid entries must be positive");
    }
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw ParameterError("rho grid must be strictly increasing");
    }
  }
  csi.validate();
  budget.validate();
  config.validate();

  std::vector<std::optional<BoundaryPoint>> pts(rho_grid.size());
  std::vector<std::string> errs(rho_grid.size());
  parallel_for(rho_grid.size(), jobs, [&](std::size_t i) {
    try {
      pts[i] = solve_boundary_point(s, rho_grid[i], csi, budget, config, af);
    } catch (const std::exception& e) {
      errs[i] = e.what();
    }
  });

  RegionBoundary out;
  out.strategy = s;
  out.budget = budget;
  out.csi_digest = csi_digest(csi);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i]) {
      out.points.push_back(std::move(*pts[i]));
    } else {
      out.failures.push_back({rho_grid[i], errs[i]});
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw ParameterError("invalid log grid");
  if (n == 1) return {lo};
  const double a = std::log2(lo), b = std::log2(hi);
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = std::exp2(a + k * (b - a) / (n - 1));
  return g;
}

std::vector<double> default_rho_grid() { return log_grid(1.0 / 32.0, 32.0, 33); }

}  // namespace twr
