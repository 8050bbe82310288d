#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid sizes, non-finite inputs, or out-of-range arguments.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of a rate function (e.g. t not in (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A power dual variable is zero where a closed form divides by it.
/// Callers should perturb alpha away from zero and retry.
class DegenerateDualError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not reach its stopping criterion. The message
/// carries the last iterate so failures can be diagnosed from logs.
class SolverError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Normalized per-subcarrier power gains of the four links.
/// g1/g2 are the uplinks T1->R and T2->R, gt1/gt2 the downlinks R->T1, R->T2.
struct ChannelState {
  std::vector<double> g1;
  std::vector<double> g2;
  std::vector<double> gt1;
  std::vector<double> gt2;

  std::size_t size() const { return g1.size(); }
  void validate() const;
};

/// Maximum average transmit powers of the two terminals and the relay.
struct PowerBudget {
  double p1 = 0.0;
  double p2 = 0.0;
  double pr = 0.0;

  void validate() const;
};

struct SnrScale {
  PowerBudget base;
  double x = 1.0;
};

/// Per-subcarrier powers of the three nodes plus the multiple-access time share t.
struct ResourceAllocation {
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> pr;
  double t = 0.5;

  /// Checks sizes, nonnegativity and 0 < t < 1.
  void validate(std::size_t n) const;
  /// Additionally checks per-node power sums against `budget` (relative tolerance).
  void validate(std::size_t n, const PowerBudget& budget, double rel_tol) const;
};

/// End-to-end rates, summed over subcarriers (bits per OFDM symbol per Hz).
struct RatePair {
  double r12 = 0.0;
  double r21 = 0.0;
};

/// cap_sum is absent for the cut-set bound and AF.
struct RegionConstraints {
  double cap12 = 0.0;
  double cap21 = 0.0;
  std::optional<double> cap_sum;
};

enum class Strategy { kMscDf, kPscDf, kAf, kCutset };

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

/// Tolerances shared by the dual solvers and the outer time-share search.
struct SolverConfig {
  double eps_dual = 1e-7;     // ellipsoid value certificate sqrt(g'Ag)
  double eps_bisect = 1e-8;   // width of the lambda3 / lambda5 bisection
  int max_iters = 500;        // ellipsoid iterations per inner solve
  double eps_feas = 1e-9;     // relative budget tolerance
  double degeneracy_tol = 1e-7;
  double alpha3_rel_tol = 1e-12;
  double t_margin = 1e-4;     // golden section runs on [t_margin, 1 - t_margin]
  double t_tol = 1e-6;

  void validate() const;
};

}  // namespace twr
