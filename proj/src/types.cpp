#include "twrelay/types.hpp"

#include <cmath>
#include <numeric>

namespace twr {
namespace {

void check_gain_vector(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw ParameterError(std::string("channel vector ") + name + " has length " +
                         std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
  bool any_positive = false;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ParameterError(std::string("channel vector ") + name +
                           " contains a negative or non-finite gain");
    }
    any_positive = any_positive || x > 0.0;
  }
  if (!any_positive) {
    throw ParameterError(std::string("channel vector ") + name + " is identically zero");
  }
}

void check_power_vector(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw ParameterError(std::string("power vector ") + name + " has length " +
                         std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ParameterError(std::string("power vector ") + name +
                           " contains a negative or non-finite entry");
    }
  }
}

}  // namespace

void ChannelState::validate() const {
  const std::size_t n = g1.size();
  if (n == 0) throw ParameterError("channel must have at least one subcarrier");
  check_gain_vector(g1, n, "g1");
  check_gain_vector(g2, n, "g2");
  check_gain_vector(gt1, n, "gt1");
  check_gain_vector(gt2, n, "gt2");
}

void PowerBudget::validate() const {
  for (double p : {p1, p2, pr}) {
    if (!std::isfinite(p) || p <= 0.0) {
      throw ParameterError("power budgets must be finite and positive");
    }
  }
}

void ResourceAllocation::validate(std::size_t n) const {
  check_power_vector(p1, n, "p1");
  check_power_vector(p2, n, "p2");
  check_power_vector(pr, n, "pr");
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("time proportion t must lie in (0,1), got " + std::to_string(t));
  }
}

void ResourceAllocation::validate(std::size_t n, const PowerBudget& budget,
                                  double rel_tol) const {
  validate(n);
  auto over = [rel_tol](const std::vector<double>& p, double cap) {
    return std::accumulate(p.begin(), p.end(), 0.0) > cap * (1.0 + rel_tol);
  };
  if (over(p1, budget.p1) || over(p2, budget.p2) || over(pr, budget.pr)) {
    throw ParameterError("allocation exceeds the power budget");
  }
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kMscDf: return "msc-df";
    case Strategy::kPscDf: return "psc-df";
    case Strategy::kAf: return "af";
    case Strategy::kCutset: return "cutset";
  }
  return "unknown";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "msc-df") return Strategy::kMscDf;
  if (name == "psc-df") return Strategy::kPscDf;
  if (name == "af") return Strategy::kAf;
  if (name == "cutset") return Strategy::kCutset;
  throw ParameterError("unknown strategy '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(eps_dual > 0 && eps_bisect > 0 && eps_feas > 0 && degeneracy_tol > 0 &&
        alpha3_rel_tol > 0 && t_tol > 0)) {
    throw ParameterError("solver tolerances must be positive");
  }
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  if (!(t_margin > 0 && t_margin < 0.5)) {
    throw ParameterError("t_margin must lie in (0, 0.5)");
  }
}

}  // namespace twr
