#pragma once

#include <span>

namespace pixmap {

inline constexpr double kDecisionThreshold = 0.5;

/// Fraction of samples whose prediction (score >= 0.5 means fake) matches
/// the label. A score of exactly 0.5 counts as a positive prediction.
double accuracy(std::span<const double> scores, std::span<const int> labels);

/// Area under the precision-recall step function: thresholds are the
/// distinct scores in descending order, tied scores enter together, and
/// AP = sum over thresholds of (recall_k - recall_{k-1}) * precision_k.
/// Returns 0 when there are no positive labels.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

}  // namespace pixmap
