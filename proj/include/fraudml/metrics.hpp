#pragma once

#include <cstdint>
#include <vector>

namespace fraudml::rf {

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// Precision-recall curve evaluated at every distinct score threshold in
// descending order; tied scores collapse into a single block so the result
// is independent of input order. The area is the step integral
// sum_k (R_k - R_{k-1}) * P_k with R_0 = 0 (average precision; no linear
// interpolation between points). points starts with the (0, P_1) endpoint.
struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
};

// Throws std::invalid_argument when sizes differ, when a score is not
// finite, or when there is no positive label ("undefined recall").
PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<std::uint8_t>& labels);

}  // namespace fraudml::rf
