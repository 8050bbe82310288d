#include "twrelay/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace twr {
namespace {

double polish(double x, double a, double b, double c) {
  for (int i = 0; i < 2; ++i) {
    const double f = ((x + a) * x + b) * x + c;
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (df == 0.0 || !std::isfinite(df)) break;
    const double nx = x - f / df;
    if (!std::isfinite(nx)) break;
    const double nf = ((nx + a) * nx + b) * nx + c;
    if (std::abs(nf) > std::abs(f)) break;
    x = nx;
  }
  return x;
}

}  // namespace

CubicRoots solve_monic_cubic(double a, double b, double c) {
  CubicRoots out;
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  out.discriminant = disc;

  if (disc > 0.0) {
    // w^3 = -q/2 - sign(q) sqrt(disc) avoids cancellation; y = w - p/(3w).
    const double sq = std::sqrt(disc);
    const double w = std::cbrt(-q / 2.0 - std::copysign(sq, q));
    const double y = (w != 0.0) ? w - p / (3.0 * w) : 0.0;
    out.real.push_back(polish(y - shift, a, b, c));
    out.complex_real_part = -y / 2.0 - shift;
  } else if (disc == 0.0) {
    if (p == 0.0) {
      out.real.push_back(polish(-shift, a, b, c));
    } else {
      const double y1 = 3.0 * q / p;
      const double y2 = -3.0 * q / (2.0 * p);
      out.real.push_back(polish(y1 - shift, a, b, c));
      out.real.push_back(polish(y2 - shift, a, b, c));
    }
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double y = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
      out.real.push_back(polish(y - shift, a, b, c));
    }
  }
  std::sort(out.real.begin(), out.real.end());
  return out;
}

}  // namespace twr
