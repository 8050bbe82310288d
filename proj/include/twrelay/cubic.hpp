#pragma once

#include <vector>

namespace twr {

struct CubicRoots {
  std::vector<double> real;   // ascending
  double discriminant = 0.0;  // q^2/4 + p^3/27 of the depressed cubic
  /// Real part of the complex-conjugate pair when discriminant > 0, else 0.
  double complex_real_part = 0.0;
};

/// Real roots of x^3 + a x^2 + b x + c by Cardano's formula. A positive
/// discriminant yields the single real root; a negative one the three
/// trigonometric roots. Each root is refined by two Newton steps.
CubicRoots solve_monic_cubic(double a, double b, double c);

}  // namespace twr
