#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coderev/language.hpp"
#include "coderev/pv.hpp"

namespace coderev {

// A stored fragment vector plus its precomputed cosine similarity to the
// per-language reference vector. cos_sim_to_ref is exactly what freeze()
// computed; the scalar index sorts on it.
struct IndexedVector {
  FragKey key;
  Language language = Language::Java;
  DocVector vector;
  float cos_sim_to_ref = 0.0f;
};

// Per-language pivot: the vector of the first fragment in (postId, fragId)
// order. Every stored and query similarity is taken against it.
struct ReferenceVector {
  Language language = Language::Java;
  DocVector vector;
  FragKey source_key;
};

// Pre-scored defectiveness attached to a fragment.
struct ScoreRecord {
  int delta = 0;
  std::string title;
};

struct PivotMatch {
  const IndexedVector* entry = nullptr;
  float distance = 0.0f;  // |alpha' - alpha|
};

struct SimMatch {
  const IndexedVector* entry = nullptr;
  float similarity = 0.0f;
};

// Deterministic reference choice: the minimal key. Throws on empty input.
FragKey choose_reference_key(std::span<const FragKey> keys);

// Frozen-after-build store of fragment vectors. insert() collects entries
// (duplicate keys and zero vectors rejected immediately); freeze() picks each
// language's reference, computes every entry's similarity to it, and builds
// the sorted scalar index. Queries require a frozen store; freezing again
// after more inserts re-derives everything.
class VectorStore {
 public:
  explicit VectorStore(std::uint32_t gamma);

  std::uint32_t gamma() const { return gamma_; }

  void insert(FragKey key, Language lang, DocVector vector);
  void freeze();
  bool frozen() const { return frozen_; }

  std::size_t size() const;
  std::size_t size(Language lang) const;
  std::vector<Language> languages() const;

  // Throws if the store has no entries for the language.
  const ReferenceVector& reference(Language lang) const;

  // The K entries whose stored similarity is closest to alpha, ascending by
  // |alpha' - alpha| with ties broken by (postId, fragId). Returns fewer than
  // K when the partition is smaller.
  std::vector<PivotMatch> topk_by_pivot(float alpha, std::size_t k,
                                        Language lang) const;

  // Exhaustive oracle: the K entries maximizing cosine(query, entry.vector),
  // descending, ties by key.
  std::vector<SimMatch> topk_exact(const DocVector& query, std::size_t k,
                                   Language lang) const;

  // Entries of one language in (postId, fragId) order. Valid after freeze().
  std::span<const IndexedVector> entries(Language lang) const;

  const IndexedVector* find(FragKey key) const;

  // Pre-scored defectiveness (loaded from scores.jsonl or set by the scorer).
  void set_score(FragKey key, ScoreRecord record);
  const ScoreRecord* score_for(FragKey key) const;
  bool has_scores() const { return !scores_.empty(); }

  // Largest |recomputed - stored| similarity deviation across all entries.
  float max_alpha_deviation() const;

  // Store directory layout: vectors.bin (row-major little-endian float32),
  // index.jsonl (postId, fragId, language, cosSim, row), reference.json,
  // and scores.jsonl when scores are present.
  void save(const std::filesystem::path& dir) const;
  static VectorStore load(const std::filesystem::path& dir);

 private:
  struct Partition {
    std::vector<IndexedVector> entries;      // key order after freeze
    std::vector<std::uint32_t> alpha_order;  // indices sorted by (alpha', key)
    std::optional<ReferenceVector> ref;
  };

  const Partition* partition(Language lang) const;

  std::uint32_t gamma_;
  bool frozen_ = false;
  std::map<Language, Partition> partitions_;
  std::set<FragKey> keys_;
  std::map<FragKey, ScoreRecord> scores_;
};

// Per-language similarity thresholds above which two samples count as
// sufficiently similar; shipped defaults, overridable per language.
double similarity_threshold(Language lang,
                            const std::map<Language, double>& overrides = {});

}  // namespace coderev
