#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace fraudml::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i exp(xs[i])), stable against under/overflow.
// An all-(-inf) input (zero total probability) yields -inf.
inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace fraudml::num
