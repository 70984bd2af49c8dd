#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coderev/defect.hpp"
#include "coderev/funcextract.hpp"
#include "coderev/pv.hpp"
#include "coderev/store.hpp"

namespace coderev {

// One retrieved fragment for one reviewed function. pair_similarity is the
// actual cosine between the function's vector and the stored vector; similar
// flags it against the per-language threshold (reporting only, the verdict
// never depends on it).
struct MatchRecord {
  std::string function_name;
  std::uint32_t function_index = 0;
  FragKey key;
  float cos_sim_to_ref = 0.0f;   // stored alpha'
  float pivot_distance = 0.0f;   // |alpha' - alpha_fn|
  float pair_similarity = 0.0f;
  bool similar = false;
  int delta = 0;
  std::string post_title;
};

struct ReviewOptions {
  std::size_t k = 5;
  bool conservative = false;  // any -1 vote forces a -1 verdict
  std::uint32_t infer_epochs = 50;
  std::map<Language, double> threshold_overrides;
};

struct ReviewReport {
  std::string file;
  Language language = Language::Java;
  std::uint32_t function_count = 0;
  std::size_t k = 5;
  bool conservative = false;
  std::vector<MatchRecord> matches;  // sorted by pivot distance, then key
  std::vector<int> votes;            // collection order
  int verdict = 0;
  DefectLabel verdict_label = DefectLabel::Unpredictable;
  bool any_low_confidence = false;
  bool whole_file_fallback = false;
};

// Statistical mode of the votes; ties prefer -1 over 300 over 1 (the
// false-negative-averse order). Throws on an empty multiset.
int majority_vote(std::span<const int> votes);

// Runs the full per-function pipeline: extract functions, infer a vector for
// each, take its similarity to the language reference, fetch the K entries
// with the closest stored similarity, collect their pre-scored deltas, and
// mode-vote the file verdict. Throws when the store is empty for the
// language, has no scores, or the model language disagrees.
ReviewReport review_source(std::string_view source, std::string_view file_label,
                           Language lang, const PvModel& model,
                           const VectorStore& store,
                           const ReviewOptions& options = {});

ReviewReport review_file(const std::filesystem::path& path, Language lang,
                         const PvModel& model, const VectorStore& store,
                         const ReviewOptions& options = {});

nlohmann::json report_to_json(const ReviewReport& report);
std::string report_to_table(const ReviewReport& report);

}  // namespace coderev
