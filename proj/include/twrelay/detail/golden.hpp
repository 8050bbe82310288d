#pragma once

#include <cmath>
#include <utility>

namespace twr::detail {

/// Golden-section maximization of a unimodal f on [lo, hi]. Returns the best
/// probed point and its value; both interval ends are probed as well so a
/// monotone objective still lands on the right boundary.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double best_x = lo, best_f = f(lo);
  auto consider = [&](double x, double v) {
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  };
  if (hi <= lo) return {best_x, best_f};
  consider(hi, f(hi));
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    }
  }
  return {best_x, best_f};
}

}  // namespace twr::detail
