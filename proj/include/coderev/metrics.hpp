#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "coderev/defect.hpp"

namespace coderev {

// Binary classification metrics with LikelyDefective as the positive class.
// precision/recall/f1 are empty when their denominator is zero.
struct MetricsResult {
  std::size_t total = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

// pairs are (predicted_defective, actually_defective).
MetricsResult compute_metrics(std::span<const std::pair<bool, bool>> pairs);

struct LabeledPair {
  DefectLabel predicted = DefectLabel::Unpredictable;
  DefectLabel actual = DefectLabel::Unpredictable;
};

struct MetricsSummary {
  MetricsResult metrics;
  std::size_t excluded_unpredictable = 0;
};

// Drops pairs where either side is Unpredictable (counted, not scored),
// then computes the binary metrics over the rest.
MetricsSummary compute_metrics(std::span<const LabeledPair> pairs);

}  // namespace coderev
