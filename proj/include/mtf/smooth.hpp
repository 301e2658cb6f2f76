#pragma once

#include <cmath>

namespace mtf {

// exp(-1/x) for x > 0, else 0.
inline double smooth_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Smooth step: 0 for x <= 0, 1 for x >= 1, C-infinity in between,
// S(x) = E(x) / (E(x) + E(1 - x)) with E(x) = exp(-1/x).
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = smooth_tail(x);
  const double b = smooth_tail(1.0 - x);
  return a / (a + b);
}

inline double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = smooth_tail(x);
  const double b = smooth_tail(1.0 - x);
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  return (da * b - a * db) / ((a + b) * (a + b));
}

// Even cutoff equal to 1 on [-1, 1] and 0 outside [-2, 2]: S(2 - |t|).
inline double cutoff_bump(double t) { return smooth_step(2.0 - std::abs(t)); }

}  // namespace mtf
