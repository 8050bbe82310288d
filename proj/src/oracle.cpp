#include "twrelay/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "twrelay/rate_model.hpp"

namespace twr {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// tau log2(1 + x / tau), taken as 0 when tau = 0.
double persp(double x, double tau) { return tau > 0.0 ? tau * log2_1p(x / tau) : 0.0; }

struct Axis {
  std::vector<double> first;  // power on subcarrier 0; subcarrier 1 gets the rest
  double step = 0.0;
};

Axis make_axis(std::size_t n_sub, double cap, int pts) {
  Axis ax;
  if (n_sub == 1) {
    ax.first = {cap};
    return ax;
  }
  ax.step = cap / (pts - 1);
  for (int k = 0; k < pts; ++k) ax.first.push_back(k == pts - 1 ? cap : cap * k / (pts - 1));
  return ax;
}

// Split of an axis value into per-subcarrier powers.
std::array<double, 2> split(std::size_t n_sub, double first, double cap) {
  if (n_sub == 1) return {first, 0.0};
  return {first, std::max(0.0, cap - first)};
}

double gmax(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Per-axis tables of the link rates at one time share.
struct Tables {
  std::vector<double> up1, up2, dn12, dn21;  // per axis index, summed over subcarriers
  std::vector<std::array<double, 2>> up1n, up2n, dn12n, dn21n;
};

Tables tables(const ChannelState& csi, const PowerBudget& b, const Axis& a1, const Axis& a2,
              const Axis& ar, double t_up, double t_dn) {
  const std::size_t n = csi.size();
  Tables tb;
  auto fill = [&](const Axis& ax, double cap, const std::vector<double>& g, double tau,
                  std::vector<double>& tot, std::vector<std::array<double, 2>>& per) {
    for (double f : ax.first) {
      const auto p = split(n, f, cap);
      std::array<double, 2> v{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) v[i] = persp(g[i] * p[i], tau);
      per.push_back(v);
      tot.push_back(v[0] + v[1]);
    }
  };
  fill(a1, b.p1, csi.g1, t_up, tb.up1, tb.up1n);
  fill(a2, b.p2, csi.g2, t_up, tb.up2, tb.up2n);
  fill(ar, b.pr, csi.gt2, t_dn, tb.dn12, tb.dn12n);
  fill(ar, b.pr, csi.gt1, t_dn, tb.dn21, tb.dn21n);
  return tb;
}

double sum_rate(const ChannelState& csi, const PowerBudget& b, double f1, double f2, double tau) {
  const std::size_t n = csi.size();
  const auto p1 = split(n, f1, b.p1), p2 = split(n, f2, b.p2);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += persp(csi.g1[i] * p1[i] + csi.g2[i] * p2[i], tau);
  return s;
}

struct PhaseMax {
  double value = -1.0;
  std::size_t i = 0, j = 0;
};

PhaseMax ma_max(const ChannelState& csi, const PowerBudget& b, const Axis& a1, const Axis& a2,
                const Tables& tb, double rho, double tau, bool with_sum) {
  PhaseMax best;
  for (std::size_t i = 0; i < a1.first.size(); ++i) {
    for (std::size_t j = 0; j < a2.first.size(); ++j) {
      double v = std::min(tb.up1[i], tb.up2[j] / rho);
      if (v <= best.value) continue;
      if (with_sum) v = std::min(v, sum_rate(csi, b, a1.first[i], a2.first[j], tau) / (1.0 + rho));
      if (v > best.value) best = {v, i, j};
    }
  }
  return best;
}

PhaseMax bc_max(const Tables& tb, double rho) {
  PhaseMax best;
  for (std::size_t k = 0; k < tb.dn12.size(); ++k) {
    const double v = std::min(tb.dn12[k], tb.dn21[k] / rho);
    if (v > best.value) best = {v, k, 0};
  }
  return best;
}

// Per-subcarrier DF objective over the full (p1, p2, pR) grid.
PhaseMax psc_max(const ChannelState& csi, const PowerBudget& b, const Axis& a1, const Axis& a2,
                 const Axis& ar, const Tables& tb, double rho, double tau, std::size_t* best_k) {
  PhaseMax best;
  const std::size_t n = csi.size();
  std::vector<double> sums(a1.first.size() * a2.first.size());
  for (std::size_t i = 0; i < a1.first.size(); ++i) {
    for (std::size_t j = 0; j < a2.first.size(); ++j) {
      sums[i * a2.first.size() + j] = sum_rate(csi, b, a1.first[i], a2.first[j], tau);
    }
  }
  for (std::size_t k = 0; k < ar.first.size(); ++k) {
    for (std::size_t i = 0; i < a1.first.size(); ++i) {
      double c12 = 0.0;
      for (std::size_t m = 0; m < n; ++m) c12 += std::min(tb.up1n[i][m], tb.dn12n[k][m]);
      if (c12 <= best.value) continue;
      for (std::size_t j = 0; j < a2.first.size(); ++j) {
        double c21 = 0.0;
        for (std::size_t m = 0; m < n; ++m) c21 += std::min(tb.up2n[j][m], tb.dn21n[k][m]);
        const double v =
            std::min({c12, c21 / rho, sums[i * a2.first.size() + j] / (1.0 + rho)});
        if (v > best.value) {
          best = {v, i, j};
          *best_k = k;
        }
      }
    }
  }
  return best;
}

}  // namespace

OracleResult grid_bruteforce_df(const ChannelState& csi, const PowerBudget& budget, double rho,
                                const GridSpec& grid, Strategy s) {
  const auto start = std::chrono::steady_clock::now();
  csi.validate();
  if (csi.size() > 2) throw ParameterError("grid oracle supports at most 2 subcarriers");
  if (grid.points_per_axis < 10) throw ParameterError("grid needs at least 10 points per axis");
  if (s == Strategy::kAf) throw ParameterError("grid oracle covers the DF strategies and cut-set");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  for (double p : {budget.p1, budget.p2, budget.pr}) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ParameterError("budgets must be nonnegative");
  }

  const int n_t = grid.points_per_axis;
  const std::size_t nsub = csi.size();
  const Axis a1 = make_axis(nsub, budget.p1, n_t), a2 = make_axis(nsub, budget.p2, n_t),
             ar = make_axis(nsub, budget.pr, n_t);
  const bool with_sum = s != Strategy::kCutset;
  const bool psc = s == Strategy::kPscDf;

  const double l1 = gmax(csi.g1) / kLn2;
  const double l2 = gmax(csi.g2) / (rho * kLn2);
  const double lr = std::max(gmax(csi.gt2), gmax(csi.gt1) / rho) / kLn2;
  const double d_ma = 0.5 * (l1 * a1.step + l2 * a2.step);
  const double d_bc = 0.5 * lr * ar.step;

  OracleResult res;
  res.bound = -1.0;
  res.upper_bound = 0.0;
  // n_t - 1 time cells, so refining n -> 3n - 2 nests both the cell centers
  // and the power lattice.
  const int cells = n_t - 1;
  const double h = 1.0 / cells;
  // Decoupled phases: phase maxima at the cell edges feed the upper bound,
  // since MA rates grow with t and BC rates shrink.
  std::vector<double> ma_edge(cells + 1), bc_edge(cells + 1);
  if (!psc) {
    for (int e = 0; e <= cells; ++e) {
      const double t = e * h;
      const Tables tb = tables(csi, budget, a1, a2, ar, t, 1.0 - t);
      ma_edge[e] = ma_max(csi, budget, a1, a2, tb, rho, t, with_sum).value;
      bc_edge[e] = bc_max(tb, rho).value;
    }
  }
  for (int k = 0; k < cells; ++k) {
    const double t = (k + 0.5) * h;
    const Tables tb = tables(csi, budget, a1, a2, ar, t, 1.0 - t);
    double v;
    std::size_t bi, bj, bk = 0;
    double ub;
    if (psc) {
      const PhaseMax m = psc_max(csi, budget, a1, a2, ar, tb, rho, t, &bk);
      v = m.value;
      bi = m.i;
      bj = m.j;
      // Envelope: uplink terms at the right cell edge, downlink at the left.
      const double tu = (k + 1) * h, td = k * h;
      const Tables te = tables(csi, budget, a1, a2, ar, tu, 1.0 - td);
      std::size_t dummy = 0;
      ub = psc_max(csi, budget, a1, a2, ar, te, rho, tu, &dummy).value + d_ma + d_bc;
    } else {
      const PhaseMax m = ma_max(csi, budget, a1, a2, tb, rho, t, with_sum);
      const PhaseMax b = bc_max(tb, rho);
      v = std::min(m.value, b.value);
      bi = m.i;
      bj = m.j;
      bk = b.i;
      ub = std::min(ma_edge[k + 1] + d_ma, bc_edge[k] + d_bc);
    }
    res.upper_bound = std::max(res.upper_bound, ub);
    if (v > res.bound) {
      res.bound = v;
      const auto p1 = split(nsub, a1.first[bi], budget.p1);
      const auto p2 = split(nsub, a2.first[bj], budget.p2);
      const auto pr = split(nsub, ar.first[bk], budget.pr);
      res.alloc.t = t;
      res.alloc.p1.assign(p1.begin(), p1.begin() + nsub);
      res.alloc.p2.assign(p2.begin(), p2.begin() + nsub);
      res.alloc.pr.assign(pr.begin(), pr.begin() + nsub);
    }
  }
  res.bound = std::max(res.bound, 0.0);
  res.upper_bound = std::max(res.upper_bound, res.bound);
  res.error_bound = res.upper_bound - res.bound;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

KktReport kkt_residuals(const std::vector<double>& p1, const std::vector<double>& p2,
                        const MaDualPoint& dual, double t, double rho, const ChannelState& csi,
                        const PowerBudget& budget) {
  KktReport rep;
  const auto& l = dual.lambda;
  const auto& a = dual.alpha;
  for (std::size_t n = 0; n < p1.size(); ++n) {
    const double g1 = csi.g1[n], g2 = csi.g2[n];
    const double x = g1 * p1[n] + g2 * p2[n];
    const double common = l[2] * t / ((rho + 1.0) * (t + x) * kLn2);
    const double d1 = l[0] * t * g1 / ((t + g1 * p1[n]) * kLn2) + g1 * common - a[0];
    const double d2 = l[1] * t * g2 / (rho * (t + g2 * p2[n]) * kLn2) + g2 * common - a[1];
    rep.stationarity = std::max(rep.stationarity, p1[n] > 0.0 ? std::abs(d1) : std::max(d1, 0.0));
    rep.stationarity = std::max(rep.stationarity, p2[n] > 0.0 ? std::abs(d2) : std::max(d2, 0.0));
    rep.infeasibility = std::max({rep.infeasibility, -p1[n], -p2[n]});
  }
  double s1 = 0.0, s2 = 0.0;
  for (double v : p1) s1 += v;
  for (double v : p2) s2 += v;
  rep.infeasibility = std::max({rep.infeasibility, s1 - budget.p1, s2 - budget.p2});
  const MaRates r = ma_rates(p1, p2, t, csi, rho);
  const double rstar = std::min({r.r1, r.r2, r.r3});
  rep.slackness = std::max({std::abs(a[0] * (budget.p1 - s1)), std::abs(a[1] * (budget.p2 - s2)),
                            l[0] * std::abs(rstar - r.r1), l[1] * std::abs(rstar - r.r2),
                            l[2] * std::abs(rstar - r.r3)});
  rep.simplex_deviation = std::abs(l[0] + l[1] + l[2] - 1.0);
  return rep;
}

KktReport bc_kkt_residuals(const std::vector<double>& pr, const BcDualPoint& dual, double t,
                           double rho, const ChannelState& csi, const PowerBudget& budget) {
  KktReport rep;
  const double tt = 1.0 - t, l5 = dual.lambda5, l4 = 1.0 - l5;
  double s = 0.0;
  for (std::size_t n = 0; n < pr.size(); ++n) {
    const double d = l4 * tt * csi.gt2[n] / ((tt + csi.gt2[n] * pr[n]) * kLn2) +
                     l5 * tt * csi.gt1[n] / (rho * (tt + csi.gt1[n] * pr[n]) * kLn2) -
                     dual.alpha3;
    rep.stationarity = std::max(rep.stationarity, pr[n] > 0.0 ? std::abs(d) : std::max(d, 0.0));
    rep.infeasibility = std::max(rep.infeasibility, -pr[n]);
    s += pr[n];
  }
  rep.infeasibility = std::max(rep.infeasibility, s - budget.pr);
  const BcRates r = bc_rates(pr, t, csi, rho);
  const double rstar = std::min(r.r4, r.r5);
  rep.slackness = std::max({std::abs(dual.alpha3 * (budget.pr - s)), l4 * std::abs(rstar - r.r4),
                            l5 * std::abs(rstar - r.r5)});
  rep.simplex_deviation = std::abs(l4 + l5 - 1.0);
  return rep;
}

ScanResult simplex_dual_scan(double t, double rho, const ChannelState& csi,
                             const PowerBudget& budget, int resolution,
                             const SolverConfig& config) {
  if (csi.size() > 4) throw ParameterError("simplex scan supports at most 4 subcarriers");
  if (resolution < 1 || resolution > 100) throw ParameterError("resolution must be in [1, 100]");
  ScanResult res;
  res.best_value = std::numeric_limits<double>::infinity();
  const InnerOptions opts{AllocRule::kCubic, false};
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; i + j <= resolution; ++j) {
      const std::array<double, 3> lambda{static_cast<double>(i) / resolution,
                                         static_cast<double>(j) / resolution,
                                         static_cast<double>(resolution - i - j) / resolution};
      const InnerSolution in = ellipsoid_inner_solve(lambda, t, rho, csi, budget, config, opts);
      ++res.points;
      if (in.best_value < res.best_value) {
        res.best_value = in.best_value;
        res.best_lambda = lambda;
      }
    }
  }
  return res;
}

}  // namespace twr
