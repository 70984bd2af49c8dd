#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace coderev {

// Positive / negative / neutral proportions for a narrative. Always on the
// unit simplex: pos + neg + neu == 1 (within float rounding).
struct SentimentScore {
  double pos = 0.0;
  double neg = 0.0;
  double neu = 1.0;
};

enum class SentimentLabel { Positive, Negative, Neutral };

std::string_view sentiment_label_name(SentimentLabel label);

// Valence lexicon plus negator and booster word lists. Valences are clamped
// to [-4, 4] on load.
struct SentimentLexicon {
  std::unordered_map<std::string, double> valence;
  std::unordered_set<std::string> negators;
  std::unordered_map<std::string, double> boosters;
};

// Built-in lexicon tuned to defect-discussion vocabulary (errors, crashes,
// fixes, thanks, ...). Roughly 200 entries.
const SentimentLexicon& default_lexicon();

// Reads "token<TAB>valence" lines (UTF-8, # comments allowed). The returned
// lexicon keeps the default negator/booster lists; only valences come from
// the file. Throws on unreadable files, malformed lines, or valences outside
// [-4, 4].
SentimentLexicon load_lexicon(const std::filesystem::path& path);

// Rule-based scoring: token valences summed with negation flips (a negator
// within the 3 preceding tokens) and booster increments; proportions taken
// over total mass where each zero-valence token contributes one unit of
// neutral mass. Empty text scores (0, 0, 1).
SentimentScore analyze_sentiment(std::string_view text,
                                 const SentimentLexicon& lexicon = default_lexicon());

// Threshold decision over the proportions:
//   Positive  iff pos >= 0.5 and pos > neg
//   Negative  iff neg >= 0.5 and neg > pos
//   Neutral   iff neu >= 0.5 and pos < 0.5 and neg < 0.5
// Anything matching no clause falls back to Neutral.
SentimentLabel decide_sentiment(const SentimentScore& score);

}  // namespace coderev
