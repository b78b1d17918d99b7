#include "pixmap/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "pixmap/error.hpp"

namespace pixmap {

namespace {

void check(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(ErrorCode::kShapeMismatch,
                "metrics need equal-length, non-empty scores and labels");
  }
}

}  // namespace

double accuracy(std::span<const double> scores, std::span<const int> labels) {
  check(scores, labels);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int predicted = scores[i] >= kDecisionThreshold ? 1 : 0;
    correct += predicted == (labels[i] != 0);
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  check(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const auto positives = static_cast<double>(
      std::count_if(labels.begin(), labels.end(), [](int y) { return y != 0; }));
  if (positives == 0.0) return 0.0;

  double ap = 0.0;
  double tp = 0.0;
  double fp = 0.0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] ? tp : fp) += 1.0;
    }
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

}  // namespace pixmap
