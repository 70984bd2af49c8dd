#pragma once

#include <map>
#include <span>
#include <string_view>

#include "coderev/ingest.hpp"
#include "coderev/sentiment.hpp"

namespace coderev {

// Defectiveness scores. 300 marks "unpredictable"; the large value makes the
// min() step keep any metadata-derived verdict while still being a distinct
// label. Persisted scores are always one of these three.
inline constexpr int kLikelyDefective = -1;
inline constexpr int kUnlikelyDefective = 1;
inline constexpr int kUnpredictable = 300;

enum class DefectLabel { LikelyDefective, UnlikelyDefective, Unpredictable };

// Post score thresholds for questions and answers.
struct DefectThresholds {
  double question_score = 1.0;
  double answer_score = 1.9;
};

// Sentiment label -> score: Negative -> -1, Positive -> 1, Neutral -> 300.
int narrative_score(SentimentLabel label);

// Defectiveness of a post's code from its type, score, and narrative label:
//   question with score > question_score          -> -1
//   question with score <= question_score         -> narrative_score
//   answer: min(score > answer_score ? 1 : -1, narrative_score)
int estimate_post(PostType type, double score, SentimentLabel narrative,
                  const DefectThresholds& thresholds = {});

// Convenience overload running the sentiment pipeline on the narrative text.
int estimate_post(const SoPost& post, std::string_view narrative,
                  const SentimentLexicon& lexicon = default_lexicon(),
                  const DefectThresholds& thresholds = {});

// Throws std::invalid_argument for values outside {-1, 1, 300}.
DefectLabel defect_label(int delta);

std::string_view defect_label_name(DefectLabel label);

// Score statistics per (language, post type), the procedure used to derive
// the shipped thresholds: reports avg plus min/max/stddev of the post score.
struct ScoreStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  double stddev = 0.0;
};

std::map<std::pair<Language, PostType>, ScoreStats> threshold_stats(
    std::span<const SoPost> posts);

}  // namespace coderev
