#include "coderev/defect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coderev {

int narrative_score(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::Negative: return kLikelyDefective;
    case SentimentLabel::Positive: return kUnlikelyDefective;
    case SentimentLabel::Neutral: return kUnpredictable;
  }
  return kUnpredictable;
}

int estimate_post(PostType type, double score, SentimentLabel narrative,
                  const DefectThresholds& thresholds) {
  if (type == PostType::Question) {
    if (score > thresholds.question_score) return kLikelyDefective;
    return narrative_score(narrative);
  }
  const int base =
      score > thresholds.answer_score ? kUnlikelyDefective : kLikelyDefective;
  return std::min(base, narrative_score(narrative));
}

int estimate_post(const SoPost& post, std::string_view narrative,
                  const SentimentLexicon& lexicon,
                  const DefectThresholds& thresholds) {
  const SentimentLabel label = decide_sentiment(analyze_sentiment(narrative, lexicon));
  return estimate_post(post.type, static_cast<double>(post.score), label,
                       thresholds);
}

DefectLabel defect_label(int delta) {
  switch (delta) {
    case kLikelyDefective: return DefectLabel::LikelyDefective;
    case kUnlikelyDefective: return DefectLabel::UnlikelyDefective;
    case kUnpredictable: return DefectLabel::Unpredictable;
    default:
      throw std::invalid_argument("defect score outside {-1, 1, 300}: " +
                                  std::to_string(delta));
  }
}

std::string_view defect_label_name(DefectLabel label) {
  switch (label) {
    case DefectLabel::LikelyDefective: return "LikelyDefective";
    case DefectLabel::UnlikelyDefective: return "UnlikelyDefective";
    case DefectLabel::Unpredictable: return "Unpredictable";
  }
  return "?";
}

std::map<std::pair<Language, PostType>, ScoreStats> threshold_stats(
    std::span<const SoPost> posts) {
  struct Acc {
    std::size_t n = 0;
    double sum = 0.0, sum_sq = 0.0;
    double min = 0.0, max = 0.0;
  };
  std::map<std::pair<Language, PostType>, Acc> accs;
  for (const SoPost& post : posts) {
    std::optional<Language> lang;
    for (const std::string& tag : post.tags) {
      if (auto l = language_from_tag(tag)) {
        lang = l;
        break;
      }
    }
    if (!lang) continue;
    Acc& acc = accs[{*lang, post.type}];
    const double s = static_cast<double>(post.score);
    if (acc.n == 0) {
      acc.min = acc.max = s;
    } else {
      acc.min = std::min(acc.min, s);
      acc.max = std::max(acc.max, s);
    }
    acc.n++;
    acc.sum += s;
    acc.sum_sq += s * s;
  }

  std::map<std::pair<Language, PostType>, ScoreStats> out;
  for (const auto& [key, acc] : accs) {
    ScoreStats stats;
    stats.count = acc.n;
    stats.min = acc.min;
    stats.max = acc.max;
    stats.avg = acc.sum / static_cast<double>(acc.n);
    const double var =
        acc.sum_sq / static_cast<double>(acc.n) - stats.avg * stats.avg;
    stats.stddev = std::sqrt(std::max(0.0, var));
    out[key] = stats;
  }
  return out;
}

}  // namespace coderev
