#include "coderev/metrics.hpp"

#include <stdexcept>
#include <vector>

namespace coderev {

MetricsResult compute_metrics(std::span<const std::pair<bool, bool>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("no prediction pairs");
  MetricsResult r;
  r.total = pairs.size();
  for (const auto& [predicted, actual] : pairs) {
    if (predicted && actual) ++r.tp;
    else if (predicted && !actual) ++r.fp;
    else if (!predicted && actual) ++r.fn;
    else ++r.tn;
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total);
  if (r.tp + r.fp > 0)
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  if (r.tp + r.fn > 0)
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.precision && r.recall && (*r.precision + *r.recall) > 0.0)
    r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
  return r;
}

MetricsSummary compute_metrics(std::span<const LabeledPair> pairs) {
  MetricsSummary summary;
  std::vector<std::pair<bool, bool>> binary;
  binary.reserve(pairs.size());
  for (const LabeledPair& p : pairs) {
    if (p.predicted == DefectLabel::Unpredictable ||
        p.actual == DefectLabel::Unpredictable) {
      ++summary.excluded_unpredictable;
      continue;
    }
    binary.emplace_back(p.predicted == DefectLabel::LikelyDefective,
                        p.actual == DefectLabel::LikelyDefective);
  }
  summary.metrics = compute_metrics(binary);
  return summary;
}

}  // namespace coderev
