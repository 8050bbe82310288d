#include "twrelay/ma_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "twrelay/cubic.hpp"
#include "twrelay/detail/golden.hpp"
#include "twrelay/region_solver.hpp"

namespace twr {
namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Weights {
  double l1, l2, l3, a1, a2, t, rho;
};

double sub_lagrangian(const Weights& w, double g1, double g2, double p1, double p2) {
  const double x1 = g1 * p1, x2 = g2 * p2;
  return w.l1 * w.t * log2_1p(x1 / w.t) + w.l2 * (w.t / w.rho) * log2_1p(x2 / w.t) +
         w.l3 * (w.t / (w.rho + 1.0)) * log2_1p((x1 + x2) / w.t) - w.a1 * p1 - w.a2 * p2;
}

// Partial derivatives of the per-subcarrier Lagrangian.
std::array<double, 2> sub_gradient(const Weights& w, double g1, double g2, double p1,
                                   double p2) {
  const double t = w.t;
  const double common = w.l3 * t / ((w.rho + 1.0) * (t + g1 * p1 + g2 * p2) * kLn2);
  return {w.l1 * t * g1 / ((t + g1 * p1) * kLn2) + g1 * common - w.a1,
          w.l2 * t * g2 / (w.rho * (t + g2 * p2) * kLn2) + g2 * common - w.a2};
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double node1_weight(const Weights& w) { return (w.rho + 1.0) * w.l1 + w.l3; }
double node2_weight(const Weights& w) { return (w.rho + 1.0) * w.l2 + w.rho * w.l3; }

// Cases 2-4: one node silent, or both.
std::pair<double, double> boundary_case(const Weights& w, double g1, double g2) {
  double c2 = -1.0, c3 = -1.0;
  if (g1 > 0.0 && node1_weight(w) > 0.0) {
    c2 = w.t * node1_weight(w) / ((w.rho + 1.0) * w.a1 * kLn2) - w.t / g1;
  }
  if (g2 > 0.0 && node2_weight(w) > 0.0) {
    c3 = w.t * node2_weight(w) / (w.rho * (w.rho + 1.0) * w.a2 * kLn2) - w.t / g2;
  }
  const bool ok2 = positive(c2), ok3 = positive(c3);
  if (ok2 && ok3) {
    if (sub_lagrangian(w, g1, g2, c2, 0.0) >= sub_lagrangian(w, g1, g2, 0.0, c3)) {
      return {c2, 0.0};
    }
    return {0.0, c3};
  }
  if (ok2) return {c2, 0.0};
  if (ok3) return {0.0, c3};
  return {0.0, 0.0};
}

Weights make_weights(const MaDualPoint& dual, double t, double rho, const ChannelState& csi) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("time proportion t must lie in (0,1)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be positive");
  for (double l : dual.lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ParameterError("lambda must be nonnegative");
  }
  Weights w{dual.lambda[0], dual.lambda[1], dual.lambda[2],
            dual.alpha[0],  dual.alpha[1],  t, rho};
  const bool any1 = std::any_of(csi.g1.begin(), csi.g1.end(), [](double g) { return g > 0; });
  const bool any2 = std::any_of(csi.g2.begin(), csi.g2.end(), [](double g) { return g > 0; });
  if (any1 && node1_weight(w) > 0.0 && !(w.a1 > 0.0)) {
    throw DegenerateDualError("alpha1 must be positive; perturb alpha away from zero");
  }
  if (any2 && node2_weight(w) > 0.0 && !(w.a2 > 0.0)) {
    throw DegenerateDualError("alpha2 must be positive; perturb alpha away from zero");
  }
  if (csi.g2.size() != csi.size()) throw ParameterError("channel vectors disagree in length");
  return w;
}

std::optional<std::pair<double, double>> case1_structured(const Weights& w, double g1,
                                                          double g2) {
  if (!(g1 > 0.0 && g2 > 0.0) || w.l3 <= 0.0) return std::nullopt;
  const double t = w.t;
  double p1, p2;
  if (w.l2 == 0.0) {
    if (w.l1 <= 0.0) return std::nullopt;
    const double d = w.a1 - (g1 / g2) * w.a2;
    if (!(d > 0.0)) return std::nullopt;
    p1 = t * w.l1 / (d * kLn2) - t / g1;
    p2 = t * w.l3 / ((w.rho + 1.0) * w.a2 * kLn2) - t * w.l1 / ((g2 / g1) * d * kLn2);
  } else {
    if (w.l2 <= 0.0) return std::nullopt;
    const double d = w.a2 - (g2 / g1) * w.a1;
    if (!(d > 0.0)) return std::nullopt;
    p2 = t * w.l2 / (w.rho * d * kLn2) - t / g2;
    p1 = t * w.l3 / ((w.rho + 1.0) * w.a1 * kLn2) - t * w.l2 / (w.rho * (g1 / g2) * d * kLn2);
  }
  if (positive(p1) && positive(p2)) return std::make_pair(p1, p2);
  return std::nullopt;
}

std::optional<std::pair<double, double>> case1_cubic(const Weights& w, double g1, double g2) {
  if (!(g1 > 0.0 && g2 > 0.0)) return std::nullopt;
  if (w.l1 == 0.0 && w.l2 == 0.0) return std::nullopt;  // split not unique
  const double t = w.t, rho = w.rho;
  if (w.l3 == 0.0) {
    // Uncoupled: each node water-fills its own rate term.
    if (w.l1 <= 0.0 || w.l2 <= 0.0) return std::nullopt;
    const double p1 = t * w.l1 / (w.a1 * kLn2) - t / g1;
    const double p2 = t * w.l2 / (rho * w.a2 * kLn2) - t / g2;
    if (positive(p1) && positive(p2)) return std::make_pair(p1, p2);
    return std::nullopt;
  }
  const double a1 = w.a1 * (rho + 1.0) * kLn2, a2 = w.a2 * (rho + 1.0) * kLn2;
  const double b1 = t * g1 * w.l3, b2 = t * g2 * w.l3;
  const double c1 = t * g1 * (rho + 1.0) * w.l1, c2 = t * g2 * (rho + 1.0) * w.l2 / rho;
  const double k3 = a1 * a2;
  const double k2 = t * a1 * a2 - (a1 * b2 + a2 * b1) - (c1 * a2 + c2 * a1);
  const double k1 = b1 * b2 - t * (a1 * b2 + a2 * b1) + (c1 * b2 + c2 * b1);
  const double k0 = t * b1 * b2;
  const CubicRoots roots = solve_monic_cubic(k2 / k3, k1 / k3, k0 / k3);
  std::vector<double> cands = roots.real;
  if (roots.discriminant > 0.0) cands.push_back(roots.complex_real_part);

  std::optional<std::pair<double, double>> best;
  double best_l = -std::numeric_limits<double>::infinity();
  for (double u : cands) {
    for (int i = 0; i < 3; ++i) {
      const double f = ((k3 * u + k2) * u + k1) * u + k0;
      const double df = (3.0 * k3 * u + 2.0 * k2) * u + k1;
      if (df == 0.0) break;
      const double nu = u - f / df;
      if (!std::isfinite(nu)) break;
      u = nu;
    }
    if (!(u > t)) continue;
    const double d1 = a1 - b1 / u, d2 = a2 - b2 / u;
    const double x = u - t;
    double p1 = std::numeric_limits<double>::quiet_NaN(), p2 = p1;
    if (w.l1 > 0.0) {
      if (!(d1 > 0.0)) continue;
      p1 = c1 / (g1 * d1) - t / g1;
    }
    if (w.l2 > 0.0) {
      if (!(d2 > 0.0)) continue;
      p2 = c2 / (g2 * d2) - t / g2;
    }
    if (w.l1 == 0.0) p1 = (x - g2 * p2) / g1;
    if (w.l2 == 0.0) p2 = (x - g1 * p1) / g2;
    if (!(positive(p1) && positive(p2))) continue;
    const auto gr = sub_gradient(w, g1, g2, p1, p2);
    if (std::abs(gr[0]) > 1e-6 * w.a1 || std::abs(gr[1]) > 1e-6 * w.a2) continue;
    const double l = sub_lagrangian(w, g1, g2, p1, p2);
    if (l > best_l) {
      best_l = l;
      best = std::make_pair(p1, p2);
    }
  }
  return best;
}

PowerSplit allocate(const MaDualPoint& dual, double t, double rho, const ChannelState& csi,
                    AllocRule rule) {
  const Weights w = make_weights(dual, t, rho, csi);
  const std::size_t n = csi.size();
  PowerSplit out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double g1 = csi.g1[i], g2 = csi.g2[i];
    const auto c1 = rule == AllocRule::kStructured ? case1_structured(w, g1, g2)
                                                   : case1_cubic(w, g1, g2);
    const auto p = c1 ? *c1 : boundary_case(w, g1, g2);
    out.p1[i] = p.first;
    out.p2[i] = p.second;
  }
  return out;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double min_rate(const MaRates& r) { return std::min({r.r1, r.r2, r.r3}); }

std::array<double, 3> edge_lambda(LambdaBranch b, double l3) {
  if (b == LambdaBranch::kLambda1) return {1.0 - l3, 0.0, l3};
  return {0.0, 1.0 - l3, l3};
}

PowerSplit blend(const PowerSplit& a, const PowerSplit& b, double theta) {
  PowerSplit out = a;
  for (std::size_t i = 0; i < a.p1.size(); ++i) {
    out.p1[i] = theta * a.p1[i] + (1.0 - theta) * b.p1[i];
    out.p2[i] = theta * a.p2[i] + (1.0 - theta) * b.p2[i];
  }
  return out;
}

void fill_budget(std::vector<double>& p, double cap) {
  const double s = sum(p);
  if (s > 0.0) {
    const double k = cap / s;
    for (double& x : p) x *= k;
  }
}

struct Lambda0Run {
  InnerSolution inner;
  Recovery recovery;
  MaRates rates;
};

Lambda0Run run_at_lambda0(double t, double rho, const ChannelState& csi,
                          const PowerBudget& budget, const SolverConfig& config) {
  Lambda0Run run;
  const std::array<double, 3> l0{0.0, 0.0, 1.0};
  run.inner = ellipsoid_inner_solve(l0, t, rho, csi, budget, config);
  MaDualPoint d{l0, run.inner.alpha};
  run.recovery = recover_primal(d, t, rho, csi, budget, config);
  // alpha is only certified in value; near a ratio tie the recovery can miss
  // the shared subcarrier, so the exact split competes.
  // Compare within the budgets: an inexact alpha can overspend.
  PowerSplit& rec = run.recovery.powers;
  if (sum(rec.p1) > budget.p1) fill_budget(rec.p1, budget.p1);
  if (sum(rec.p2) > budget.p2) fill_budget(rec.p2, budget.p2);
  PowerSplit exact = sum_rate_allocation(t, rho, csi, budget);
  if (ma_rates(exact.p1, exact.p2, t, csi, rho).r3 >= ma_rates(rec.p1, rec.p2, t, csi, rho).r3) {
    // The prices implied by the exact split: the largest marginal sum-rate
    // gain per unit of each terminal's power.
    const double k = t / ((rho + 1.0) * kLn2);
    std::array<double, 2> alpha{0.0, 0.0};
    for (std::size_t i = 0; i < csi.size(); ++i) {
      const double x = csi.g1[i] * exact.p1[i] + csi.g2[i] * exact.p2[i];
      alpha[0] = std::max(alpha[0], k * csi.g1[i] / (t + x));
      alpha[1] = std::max(alpha[1], k * csi.g2[i] / (t + x));
    }
    run.inner.alpha = alpha;
    rec = std::move(exact);
  }
  run.rates = ma_rates(run.recovery.powers.p1, run.recovery.powers.p2, t, csi, rho);
  return run;
}

}  // namespace

std::string_view to_string(LambdaBranch b) {
  switch (b) {
    case LambdaBranch::kLambda1: return "lambda1";
    case LambdaBranch::kLambda2: return "lambda2";
    case LambdaBranch::kAtLambda0: return "lambda0";
  }
  return "unknown";
}

PowerSplit kkt_power_allocation(const MaDualPoint& dual, double t, double rho,
                                const ChannelState& csi) {
  const auto& l = dual.lambda;
  const bool on_edge = (l[1] == 0.0 || l[0] == 0.0);
  if (!on_edge || std::abs(l[0] + l[1] + l[2] - 1.0) > 1e-9) {
    throw ParameterError("structured allocation requires lambda on an edge lambda1=0 or lambda2=0");
  }
  return allocate(dual, t, rho, csi, AllocRule::kStructured);
}

PowerSplit cubic_power_allocation(const MaDualPoint& dual, double t, double rho,
                                  const ChannelState& csi) {
  return allocate(dual, t, rho, csi, AllocRule::kCubic);
}

std::array<double, 2> alpha_subgradient(const std::vector<double>& p1,
                                        const std::vector<double>& p2,
                                        const PowerBudget& budget) {
  return {sum(p1) - budget.p1, sum(p2) - budget.p2};
}

std::array<double, 2> alpha_bounds(const std::array<double, 3>& lambda, double rho,
                                   const ChannelState& csi) {
  const double g1 = *std::max_element(csi.g1.begin(), csi.g1.end());
  const double g2 = *std::max_element(csi.g2.begin(), csi.g2.end());
  const double d = (rho + 1.0) * kLn2;
  return {((rho + 1.0) * lambda[0] + lambda[2]) / d * g1,
          ((rho + 1.0) * lambda[1] + lambda[2]) / d * g2};
}

double ma_lagrangian(const MaDualPoint& dual, const PowerSplit& p, double t, double rho,
                     const ChannelState& csi, const PowerBudget& budget) {
  const MaRates r = ma_rates(p.p1, p.p2, t, csi, rho);
  const auto g = alpha_subgradient(p.p1, p.p2, budget);
  return dual.lambda[0] * r.r1 + dual.lambda[1] * r.r2 + dual.lambda[2] * r.r3 -
         dual.alpha[0] * g[0] - dual.alpha[1] * g[1];
}

void ellipsoid_step(std::array<double, 2>& c, std::array<double, 4>& a,
                    const std::array<double, 2>& g) {
  const double ag0 = a[0] * g[0] + a[1] * g[1];
  const double ag1 = a[2] * g[0] + a[3] * g[1];
  const double gag = g[0] * ag0 + g[1] * ag1;
  if (!(gag > 0.0)) return;
  const double s = 1.0 / std::sqrt(gag);
  const double h0 = ag0 * s, h1 = ag1 * s;  // A * g~
  c[0] -= h0 / 3.0;
  c[1] -= h1 / 3.0;
  // One off-diagonal value for both slots: any asymmetry would grow by 4/3 per step.
  const double off = 4.0 / 3.0 * (0.5 * (a[1] + a[2]) - 2.0 / 3.0 * h0 * h1);
  a[0] = 4.0 / 3.0 * (a[0] - 2.0 / 3.0 * h0 * h0);
  a[3] = 4.0 / 3.0 * (a[3] - 2.0 / 3.0 * h1 * h1);
  a[1] = a[2] = off;
}

InnerSolution ellipsoid_inner_solve(const std::array<double, 3>& lambda, double t, double rho,
                                    const ChannelState& csi, const PowerBudget& budget,
                                    const SolverConfig& config, const InnerOptions& opts) {
  const auto amax = alpha_bounds(lambda, rho, csi);
  const double floor = 1e-12 * std::max(amax[0], amax[1]);
  if (!(floor > 0.0)) throw ParameterError("lambda must have a positive component");

  // Circumscribes the box [0, a1max] x [0, a2max].
  std::array<double, 2> c{amax[0] / 2.0, amax[1] / 2.0};
  std::array<double, 4> a{amax[0] * amax[0] / 2.0, 0.0, 0.0, amax[1] * amax[1] / 2.0};
  const bool budget_matters = opts.need_budget && (lambda[0] > 0.0 || lambda[1] > 0.0);

  InnerSolution out;
  out.best_value = std::numeric_limits<double>::infinity();
  bool certified = false;
  double last_cert = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= config.max_iters; ++it) {
    out.iterations = it;
    if (c[0] < 0.0 || c[1] < 0.0) {
      std::array<double, 2> cut{0.0, 0.0};
      cut[c[0] < 0.0 ? 0 : 1] = -1.0;
      ellipsoid_step(c, a, cut);
      continue;
    }
    MaDualPoint d{lambda, {std::max(c[0], floor), std::max(c[1], floor)}};
    PowerSplit p = allocate(d, t, rho, csi, opts.rule);
    const double value = ma_lagrangian(d, p, t, rho, csi, budget);
    const auto eta = alpha_subgradient(p.p1, p.p2, budget);
    const std::array<double, 2> g{-eta[0], -eta[1]};
    out.best_value = std::min(out.best_value, value);

    const double gag = g[0] * (a[0] * g[0] + a[1] * g[1]) + g[1] * (a[2] * g[0] + a[3] * g[1]);
    const double cert = std::sqrt(std::max(gag, 0.0));
    last_cert = cert;
    const bool value_ok = cert <= config.eps_dual;
    bool budget_ok = true;
    if (budget_matters) {
      const double caps[2] = {budget.p1, budget.p2};
      for (int i = 0; i < 2; ++i) {
        const double used = eta[i] + caps[i];
        const bool tight = std::abs(eta[i]) <= config.eps_feas * caps[i];
        const bool idle = amax[i] == 0.0 && used <= caps[i] * (1.0 + config.eps_feas);
        budget_ok = budget_ok && (tight || idle);
      }
    }
    const bool collapsed =
        std::sqrt(std::max(a[0], 0.0)) <= 1e-13 * std::max(std::abs(c[0]), floor) &&
        std::sqrt(std::max(a[3], 0.0)) <= 1e-13 * std::max(std::abs(c[1]), floor);

    out.alpha = d.alpha;
    out.powers = std::move(p);
    out.value = value;
    out.budget_met = budget_ok;
    certified = certified || value_ok;
    if (gag <= 0.0 || (value_ok && budget_ok) || collapsed) {
      out.budget_met = budget_ok;
      return out;
    }
    ellipsoid_step(c, a, g);
  }
  if (certified) return out;
  std::ostringstream msg;
  msg.precision(12);
  msg << "ellipsoid did not converge in " << config.max_iters << " iterations: lambda=("
      << lambda[0] << "," << lambda[1] << "," << lambda[2] << ") alpha=(" << c[0] << ","
      << c[1] << ") certificate=" << last_cert << " t=" << t;
  throw SolverError(msg.str());
}

LambdaBranch classify_branch(const MaRates& r) {
  const double tol = 1e-9 * (1.0 + std::abs(r.r3));
  const bool ge1 = r.r3 >= r.r1 - tol;
  const bool ge2 = r.r3 >= r.r2 - tol;
  if (ge1 && ge2) return LambdaBranch::kAtLambda0;
  if (ge1) return LambdaBranch::kLambda1;
  if (ge2) return LambdaBranch::kLambda2;
  // r3 is the smallest rate and the point maximizes r3: lambda0 is optimal.
  return LambdaBranch::kAtLambda0;
}

LambdaBranch lambda_branch_test(double t, double rho, const ChannelState& csi,
                                const PowerBudget& budget, const SolverConfig& config) {
  return classify_branch(run_at_lambda0(t, rho, csi, budget, config).rates);
}

Recovery recover_primal(const MaDualPoint& dual, double t, double rho, const ChannelState& csi,
                        const PowerBudget& budget, const SolverConfig& config) {
  Recovery out;
  if (dual.lambda[0] > 0.0 || dual.lambda[1] > 0.0) {
    out.powers = allocate(dual, t, rho, csi, AllocRule::kStructured);
    return out;
  }
  const Weights w = make_weights(dual, t, rho, csi);
  out.powers = allocate(dual, t, rho, csi, AllocRule::kStructured);
  const std::size_t n = csi.size();
  std::vector<std::size_t> tied;
  std::vector<double> load(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double g1 = csi.g1[i], g2 = csi.g2[i];
    if (!(g1 > 0.0 && g2 > 0.0)) continue;
    if (std::abs(w.a1 * g2 - w.a2 * g1) > config.degeneracy_tol * w.a1 * g2) continue;
    const double k = w.t * w.l3 / ((w.rho + 1.0) * kLn2);
    const double s = 0.5 * (k * g1 / w.a1 + k * g2 / w.a2) - w.t;
    if (!(s > 0.0)) continue;
    tied.push_back(i);
    load[i] = s;
  }
  out.degenerate = static_cast<int>(tied.size());
  if (tied.empty()) return out;

  double fixed1 = 0.0, fixed2 = 0.0, w1 = 0.0, w2 = 0.0;
  std::vector<bool> is_tied(n, false);
  for (std::size_t i : tied) {
    is_tied[i] = true;
    w1 += load[i] / csi.g1[i];
    w2 += load[i] / csi.g2[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (is_tied[i]) continue;
    fixed1 += out.powers.p1[i];
    fixed2 += out.powers.p2[i];
  }
  // theta is node 1's share of every tied load.
  const double th_hi = std::min(1.0, (budget.p1 - fixed1) / w1);
  const double th_lo = std::max(0.0, 1.0 - (budget.p2 - fixed2) / w2);

  auto build = [&](double th) {
    PowerSplit p = out.powers;
    for (std::size_t i : tied) {
      p.p1[i] = th * load[i] / csi.g1[i];
      p.p2[i] = (1.0 - th) * load[i] / csi.g2[i];
    }
    return p;
  };
  double theta;
  if (th_lo <= th_hi) {
    theta = detail::golden_max(
                [&](double th) {
                  const PowerSplit p = build(th);
                  return min_rate(ma_rates(p.p1, p.p2, t, csi, rho));
                },
                th_lo, th_hi, 1e-12)
                .first;
  } else {
    theta = std::clamp(0.5 * (th_lo + th_hi), 0.0, 1.0);
    out.warning = th_lo - th_hi > 1e-9;
  }
  out.powers = build(theta);
  const double s1 = sum(out.powers.p1), s2 = sum(out.powers.p2);
  if (s1 > budget.p1) fill_budget(out.powers.p1, budget.p1);
  if (s2 > budget.p2) fill_budget(out.powers.p2, budget.p2);
  return out;
}

PowerSplit sum_rate_allocation(double t, double rho, const ChannelState& csi,
                               const PowerBudget& budget) {
  const std::size_t n = csi.size();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) order.push_back(i);
  // Descending g1/g2; zero gains sort to the ends.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return csi.g1[a] * csi.g2[b] > csi.g1[b] * csi.g2[a];
  });

  PowerSplit best{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  double best_r3 = -1.0, best_min = -1.0;
  auto consider = [&](PowerSplit&& p) {
    const MaRates r = ma_rates(p.p1, p.p2, t, csi, rho);
    const double tol = 1e-12 * std::max(1.0, best_r3);
    if (r.r3 > best_r3 + tol || (r.r3 >= best_r3 - tol && min_rate(r) > best_min)) {
      best_r3 = std::max(best_r3, r.r3);
      best_min = min_rate(r);
      best = std::move(p);
    }
  };
  auto restricted = [&](const std::vector<double>& g, std::size_t from, std::size_t to) {
    std::vector<double> gains(n, 0.0);
    for (std::size_t k = from; k < to; ++k) gains[order[k]] = g[order[k]];
    return gains;
  };

  // Pure splits: terminal 1 takes the first s subcarriers.
  for (std::size_t s = 0; s <= n; ++s) {
    PowerSplit p{waterfill(restricted(csi.g1, 0, s), budget.p1, t),
                 waterfill(restricted(csi.g2, s, n), budget.p2, t)};
    consider(std::move(p));
  }

  // One shared group [lo, hi) of equal ratio. With price c = alpha1 / g1k the
  // received powers are x = L e - t, L = K / c, and both budgets combine into a
  // single weighted water-filling in units of terminal 1's power.
  for (std::size_t lo = 0; lo < n;) {
    const std::size_t k = order[lo];
    std::size_t hi = lo + 1;
    while (hi < n && csi.g1[order[hi]] * csi.g2[k] == csi.g1[k] * csi.g2[order[hi]]) ++hi;
    const double g1k = csi.g1[k], g2k = csi.g2[k];
    if (g1k > 0.0 && g2k > 0.0) {
      const double rk = g1k / g2k;
      std::vector<double> e(n), w(n);
      for (std::size_t q = 0; q < n; ++q) {
        const std::size_t i = order[q];
        if (q < hi) {
          e[i] = csi.g1[i] / g1k;
          w[i] = csi.g1[i] > 0.0 ? 1.0 / csi.g1[i] : 0.0;
        } else {
          e[i] = csi.g2[i] / g2k;
          w[i] = csi.g2[i] > 0.0 ? 1.0 / (rk * csi.g2[i]) : 0.0;
        }
      }
      // Level L solving sum w max(0, L e - t) = P1 + P2 / rk.
      std::vector<std::size_t> act;
      for (std::size_t i = 0; i < n; ++i) {
        if (e[i] > 0.0 && w[i] > 0.0) act.push_back(i);
      }
      std::sort(act.begin(), act.end(), [&](std::size_t a, std::size_t b) {
        return t / e[a] < t / e[b];
      });
      const double total = budget.p1 + budget.p2 / rk;
      double sw = 0.0, swe = 0.0, level = 0.0;
      for (std::size_t m = 0; m < act.size(); ++m) {
        sw += w[act[m]];
        swe += w[act[m]] * e[act[m]];
        level = (total + t * sw) / swe;
        if (m + 1 == act.size() || level <= t / e[act[m + 1]]) break;
      }
      std::vector<double> x(n, 0.0);
      double a1 = 0.0, b1 = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const std::size_t i = order[q];
        if (!(e[i] > 0.0 && w[i] > 0.0)) continue;
        x[i] = std::max(0.0, level * e[i] - t);
        if (q < lo) a1 += x[i] / csi.g1[i];
        else if (q < hi) b1 += x[i] / csi.g1[i];
      }
      const double theta = b1 > 0.0 ? (budget.p1 - a1) / b1 : -1.0;
      if (theta >= -1e-12 && theta <= 1.0 + 1e-12) {
        const double th = std::clamp(theta, 0.0, 1.0);
        PowerSplit p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        for (std::size_t q = 0; q < n; ++q) {
          const std::size_t i = order[q];
          if (x[i] <= 0.0) continue;
          if (q < lo) {
            p.p1[i] = x[i] / csi.g1[i];
          } else if (q < hi) {
            p.p1[i] = th * x[i] / csi.g1[i];
            p.p2[i] = (1.0 - th) * x[i] / csi.g2[i];
          } else {
            p.p2[i] = x[i] / csi.g2[i];
          }
        }
        consider(std::move(p));
      }
    }
    lo = hi;
  }
  return best;
}

MaSolution solve_ma(double t, double rho, const ChannelState& csi, const PowerBudget& budget,
                    const SolverConfig& config) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("time proportion t must lie in (0,1)");
  budget.validate();
  csi.validate();

  MaSolution sol;
  const Lambda0Run l0 = run_at_lambda0(t, rho, csi, budget, config);
  sol.branch = classify_branch(l0.rates);
  double dual_value = l0.inner.best_value;
  sol.recovery_warning = l0.recovery.warning;

  PowerSplit final_p;
  if (sol.branch == LambdaBranch::kAtLambda0) {
    final_p = l0.recovery.powers;
    sol.dual = {{0.0, 0.0, 1.0}, l0.inner.alpha};
  } else {
    const LambdaBranch br = sol.branch;
    double lo = 0.0, hi = 1.0;
    std::optional<InnerSolution> at_lo;
    PowerSplit p_hi = l0.recovery.powers;
    MaDualPoint d_hi{{0.0, 0.0, 1.0}, l0.inner.alpha};
    double v_hi = l0.inner.best_value, v_lo = std::numeric_limits<double>::infinity();
    while (hi - lo > config.eps_bisect) {
      const double mid = 0.5 * (lo + hi);
      const auto lambda = edge_lambda(br, mid);
      InnerSolution in = ellipsoid_inner_solve(lambda, t, rho, csi, budget, config);
      dual_value = std::min(dual_value, in.best_value);
      const MaRates r = ma_rates(in.powers.p1, in.powers.p2, t, csi, rho);
      const double zeta = (br == LambdaBranch::kLambda1 ? r.r1 : r.r2) - r.r3;
      if (zeta < 0.0) {
        hi = mid;
        p_hi = in.powers;
        d_hi = {lambda, in.alpha};
        v_hi = in.best_value;
      } else {
        lo = mid;
        v_lo = in.best_value;
        at_lo = std::move(in);
      }
    }
    if (!at_lo) {
      InnerSolution in = ellipsoid_inner_solve(edge_lambda(br, lo), t, rho, csi, budget, config);
      dual_value = std::min(dual_value, in.best_value);
      v_lo = in.best_value;
      at_lo = std::move(in);
    }
    const PowerSplit& p_lo = at_lo->powers;
    const double theta =
        detail::golden_max(
            [&](double th) {
              const PowerSplit p = blend(p_lo, p_hi, th);
              return min_rate(ma_rates(p.p1, p.p2, t, csi, rho));
            },
            0.0, 1.0, 1e-10)
            .first;
    final_p = blend(p_lo, p_hi, theta);
    sol.dual = v_lo <= v_hi ? MaDualPoint{edge_lambda(br, lo), at_lo->alpha} : d_hi;
  }

  fill_budget(final_p.p1, budget.p1);
  fill_budget(final_p.p2, budget.p2);
  sol.rates = ma_rates(final_p.p1, final_p.p2, t, csi, rho);
  sol.rate = min_rate(sol.rates);
  sol.p1 = std::move(final_p.p1);
  sol.p2 = std::move(final_p.p2);
  sol.dual_value = dual_value;
  sol.gap = std::abs(dual_value - sol.rate);
  return sol;
}

}  // namespace twr
