#include "coderev/review.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coderev/preproc.hpp"

namespace coderev {

int majority_vote(std::span<const int> votes) {
  if (votes.empty()) throw std::runtime_error("no matches: empty vote multiset");
  std::size_t likely = 0, unlikely = 0, unpredictable = 0;
  for (int v : votes) {
    switch (v) {
      case kLikelyDefective: ++likely; break;
      case kUnlikelyDefective: ++unlikely; break;
      case kUnpredictable: ++unpredictable; break;
      default:
        throw std::invalid_argument("vote outside {-1, 1, 300}: " + std::to_string(v));
    }
  }
  // Tie preference: -1 over 300 over 1.
  const std::array<std::pair<std::size_t, int>, 3> ranked = {{
      {likely, kLikelyDefective},
      {unpredictable, kUnpredictable},
      {unlikely, kUnlikelyDefective},
  }};
  std::size_t best_count = 0;
  int best = kLikelyDefective;
  for (const auto& [count, value] : ranked) {
    if (count > best_count) {
      best_count = count;
      best = value;
    }
  }
  return best;
}

ReviewReport review_source(std::string_view source, std::string_view file_label,
                           Language lang, const PvModel& model,
                           const VectorStore& store,
                           const ReviewOptions& options) {
  if (model.language != lang)
    throw std::runtime_error(
        std::string("model trained for ") +
        std::string(language_name(model.language)) + ", file is " +
        std::string(language_name(lang)));
  if (store.size(lang) == 0)
    throw std::runtime_error(std::string("store has no entries for ") +
                             std::string(language_name(lang)));
  if (!store.has_scores())
    throw std::runtime_error(
        "store has no defect scores (run the score step first)");
  if (options.k == 0) throw std::invalid_argument("k must be positive");

  const ReferenceVector& ref = store.reference(lang);
  const double alpha_hat = similarity_threshold(lang, options.threshold_overrides);

  ReviewReport report;
  report.file = std::string(file_label);
  report.language = lang;
  report.k = options.k;
  report.conservative = options.conservative;

  ExtractStats extract_stats;
  const std::vector<FunctionUnit> functions =
      extract_functions(source, lang, &extract_stats);
  if (functions.empty()) throw std::runtime_error("empty source file");
  report.function_count = static_cast<std::uint32_t>(functions.size());
  report.whole_file_fallback = extract_stats.whole_file_fallback;

  for (std::uint32_t fi = 0; fi < functions.size(); ++fi) {
    const FunctionUnit& fn = functions[fi];
    const InferResult inferred =
        infer_vector(model, preprocess(fn.body_text, lang), options.infer_epochs);
    report.any_low_confidence |= inferred.low_confidence;
    const float alpha = cosine_similarity(
        inferred.vector.data(), ref.vector.data(), ref.vector.size());

    const std::vector<PivotMatch> candidates =
        store.topk_by_pivot(alpha, options.k, lang);
    for (const PivotMatch& c : candidates) {
      const ScoreRecord* score = store.score_for(c.entry->key);
      if (!score)
        throw std::runtime_error("store entry (" +
                                 std::to_string(c.entry->key.post_id) + ", " +
                                 std::to_string(c.entry->key.frag_id) +
                                 ") has no defect score");
      MatchRecord match;
      match.function_name = fn.name;
      match.function_index = fi;
      match.key = c.entry->key;
      match.cos_sim_to_ref = c.entry->cos_sim_to_ref;
      match.pivot_distance = c.distance;
      match.pair_similarity = cosine_similarity(
          inferred.vector.data(), c.entry->vector.data(), c.entry->vector.size());
      match.similar = match.pair_similarity >= static_cast<float>(alpha_hat);
      match.delta = score->delta;
      match.post_title = score->title;
      report.votes.push_back(score->delta);
      report.matches.push_back(std::move(match));
    }
  }

  std::stable_sort(report.matches.begin(), report.matches.end(),
                   [](const MatchRecord& a, const MatchRecord& b) {
                     if (a.pivot_distance != b.pivot_distance)
                       return a.pivot_distance < b.pivot_distance;
                     return a.key < b.key;
                   });

  report.verdict = majority_vote(report.votes);
  if (options.conservative &&
      std::find(report.votes.begin(), report.votes.end(), kLikelyDefective) !=
          report.votes.end())
    report.verdict = kLikelyDefective;
  report.verdict_label = defect_label(report.verdict);
  return report;
}

ReviewReport review_file(const std::filesystem::path& path, Language lang,
                         const PvModel& model, const VectorStore& store,
                         const ReviewOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read source file: " + path.string());
  std::string source((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
  return review_source(source, path.string(), lang, model, store, options);
}

nlohmann::json report_to_json(const ReviewReport& report) {
  nlohmann::json matches = nlohmann::json::array();
  for (const MatchRecord& m : report.matches) {
    matches.push_back(nlohmann::json{
        {"cosSim", m.cos_sim_to_ref},
        {"delta", m.delta},
        {"fragId", m.key.frag_id},
        {"function", m.function_name},
        {"functionIndex", m.function_index},
        {"label", defect_label_name(defect_label(m.delta))},
        {"pairSim", m.pair_similarity},
        {"pivotDistance", m.pivot_distance},
        {"postId", m.key.post_id},
        {"similar", m.similar},
        {"title", m.post_title},
    });
  }
  return nlohmann::json{
      {"conservative", report.conservative},
      {"file", report.file},
      {"functionCount", report.function_count},
      {"k", report.k},
      {"language", language_name(report.language)},
      {"lowConfidence", report.any_low_confidence},
      {"matches", matches},
      {"verdict", report.verdict},
      {"verdictLabel", defect_label_name(report.verdict_label)},
      {"votes", report.votes},
      {"wholeFileFallback", report.whole_file_fallback},
  };
}

std::string report_to_table(const ReviewReport& report) {
  std::ostringstream out;
  out << "file:      " << report.file << "\n"
      << "language:  " << language_name(report.language) << "\n"
      << "functions: " << report.function_count << "\n"
      << "verdict:   " << defect_label_name(report.verdict_label) << " ("
      << report.verdict << ")\n\n";
  out << "  function              postId    fragId  cosSim    pivotDist  pairSim   similar  delta  title\n";
  for (const MatchRecord& m : report.matches) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  %-20.20s  %-8lld  %-6d  %-8.4f  %-9.6f  %-8.4f  %-7s  %-5d  %.40s\n",
                  m.function_name.empty() ? "(file)" : m.function_name.c_str(),
                  static_cast<long long>(m.key.post_id), m.key.frag_id,
                  m.cos_sim_to_ref, m.pivot_distance, m.pair_similarity,
                  m.similar ? "yes" : "no", m.delta, m.post_title.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace coderev
