#include "twrelay/bc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "twrelay/detail/golden.hpp"

namespace twr {
namespace {

constexpr double kLn2 = std::numbers::ln2;

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Largest real root of a x^2 + b x + c with a > 0, or NaN.
double larger_root(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double sq = std::sqrt(disc);
  if (b > 0.0) return -2.0 * c / (b + sq);
  return (-b + sq) / (2.0 * a);
}

struct InnerBc {
  std::vector<double> pr;
  double alpha3 = 0.0;
};

InnerBc solve_alpha3(double lambda5, double t, double rho, const ChannelState& csi,
                     const PowerBudget& budget, const SolverConfig& config) {
  double lo = 0.0, hi = alpha3_bound(lambda5, rho, csi);
  if (!(hi > 0.0)) return {std::vector<double>(csi.size(), 0.0), 0.0};
  int guard = 0;
  while (hi - lo > config.alpha3_rel_tol * hi) {
    if (++guard > 400) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "alpha3 bisection stalled at [" << lo << ", " << hi << "] t=" << t;
      throw SolverError(msg.str());
    }
    const double mid = 0.5 * (lo + hi);
    const auto pr = quadratic_power_allocation({lambda5, mid}, t, rho, csi);
    if (sum(pr) < budget.pr) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {quadratic_power_allocation({lambda5, hi}, t, rho, csi), hi};
}

double min_rate(const BcRates& r) { return std::min(r.r4, r.r5); }

}  // namespace

std::vector<double> quadratic_power_allocation(const BcDualPoint& dual, double t, double rho,
                                               const ChannelState& csi) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("time proportion t must lie in (0,1)");
  if (!(dual.alpha3 > 0.0)) {
    throw DegenerateDualError("alpha3 must be positive; perturb alpha3 away from zero");
  }
  const double tt = 1.0 - t;
  const double k = dual.alpha3 * kLn2;
  const double l4 = 1.0 - dual.lambda5, l5 = dual.lambda5;
  std::vector<double> pr(csi.size(), 0.0);
  for (std::size_t n = 0; n < csi.size(); ++n) {
    const double gd2 = csi.gt2[n], gd1 = csi.gt1[n];
    const double a = l4 * tt * gd2;        // weight of the T1 -> T2 relay link
    const double b = l5 * tt * gd1 / rho;  // weight of the T2 -> T1 relay link
    const bool has_a = a > 0.0, has_b = b > 0.0;
    double x;
    if (has_a && has_b) {
      x = larger_root(k * gd1 * gd2, k * tt * (gd1 + gd2) - a * gd1 - b * gd2,
                      k * tt * tt - (a + b) * tt);
    } else if (has_a) {
      x = (a / k - tt) / gd2;
    } else if (has_b) {
      x = (b / k - tt) / gd1;
    } else {
      x = 0.0;
    }
    pr[n] = (std::isfinite(x) && x > 0.0) ? x : 0.0;
  }
  return pr;
}

double alpha3_bound(double lambda5, double rho, const ChannelState& csi) {
  double best = 0.0;
  for (std::size_t n = 0; n < csi.size(); ++n) {
    best = std::max(best, (rho * csi.gt2[n] * (1.0 - lambda5) + csi.gt1[n] * lambda5) /
                              (rho * kLn2));
  }
  return best;
}

double bc_lagrangian(const BcDualPoint& dual, const std::vector<double>& pr, double t,
                     double rho, const ChannelState& csi, const PowerBudget& budget) {
  const BcRates r = bc_rates(pr, t, csi, rho);
  return (1.0 - dual.lambda5) * r.r4 + dual.lambda5 * r.r5 - dual.alpha3 * (sum(pr) - budget.pr);
}

BcSolution solve_bc(double t, double rho, const ChannelState& csi, const PowerBudget& budget,
                    const SolverConfig& config) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("time proportion t must lie in (0,1)");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  budget.validate();
  csi.validate();

  BcSolution sol;
  double dual_value = std::numeric_limits<double>::infinity();
  auto probe = [&](double l5) {
    InnerBc in = solve_alpha3(l5, t, rho, csi, budget, config);
    dual_value = std::min(dual_value, bc_lagrangian({l5, in.alpha3}, in.pr, t, rho, csi, budget));
    return in;
  };

  double lo = 0.0, hi = 1.0;
  InnerBc at_lo, at_hi;
  bool have_lo = false, have_hi = false;
  while (hi - lo > config.eps_bisect) {
    const double mid = 0.5 * (lo + hi);
    InnerBc in = probe(mid);
    const BcRates r = bc_rates(in.pr, t, csi, rho);
    if (r.r4 < r.r5) {
      hi = mid;
      at_hi = std::move(in);
      have_hi = true;
    } else {
      lo = mid;
      at_lo = std::move(in);
      have_lo = true;
    }
  }
  if (!have_lo) at_lo = probe(lo);
  if (!have_hi) at_hi = probe(hi);

  const double theta =
      detail::golden_max(
          [&](double th) {
            std::vector<double> p(at_lo.pr.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
              p[i] = th * at_lo.pr[i] + (1.0 - th) * at_hi.pr[i];
            }
            return min_rate(bc_rates(p, t, csi, rho));
          },
          0.0, 1.0, 1e-10)
          .first;
  sol.pr.resize(at_lo.pr.size());
  for (std::size_t i = 0; i < sol.pr.size(); ++i) {
    sol.pr[i] = theta * at_lo.pr[i] + (1.0 - theta) * at_hi.pr[i];
  }
  const double s = sum(sol.pr);
  if (s > 0.0) {
    for (double& x : sol.pr) x *= budget.pr / s;
  }
  sol.dual = theta >= 0.5 ? BcDualPoint{lo, at_lo.alpha3} : BcDualPoint{hi, at_hi.alpha3};
  sol.rates = bc_rates(sol.pr, t, csi, rho);
  sol.rate = min_rate(sol.rates);
  sol.dual_value = dual_value;
  sol.gap = std::abs(dual_value - sol.rate);
  return sol;
}

}  // namespace twr
