#include "fraudml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fraudml::rf {

PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  std::int64_t total_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) throw std::invalid_argument("non-finite score");
    total_pos += labels[i] ? 1 : 0;
  }
  if (total_pos == 0) throw std::invalid_argument("undefined recall: no positive labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  PrCurve curve;
  std::int64_t tp = 0, fp = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] ? tp : fp) += 1;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    curve.auc += (recall - prev_recall) * precision;
    curve.points.push_back({recall, precision});
    prev_recall = recall;
  }
  curve.points.insert(curve.points.begin(), {0.0, curve.points.front().precision});
  return curve;
}

}  // namespace fraudml::rf
