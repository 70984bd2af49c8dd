#include "coderev/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coderev/kernels.hpp"

namespace coderev {

FragKey choose_reference_key(std::span<const FragKey> keys) {
  if (keys.empty())
    throw std::runtime_error("cannot choose a reference from an empty set");
  return *std::min_element(keys.begin(), keys.end());
}

VectorStore::VectorStore(std::uint32_t gamma) : gamma_(gamma) {
  if (gamma < 1) throw std::invalid_argument("store gamma must be positive");
}

void VectorStore::insert(FragKey key, Language lang, DocVector vector) {
  if (vector.size() != gamma_)
    throw std::invalid_argument("vector length does not match store gamma");
  const bool all_zero =
      std::all_of(vector.begin(), vector.end(), [](float v) { return v == 0.0f; });
  if (all_zero) throw std::invalid_argument("zero vector cannot be indexed");
  if (!keys_.insert(key).second)
    throw std::invalid_argument("duplicate fragment key (" +
                                std::to_string(key.post_id) + ", " +
                                std::to_string(key.frag_id) + ")");
  IndexedVector entry;
  entry.key = key;
  entry.language = lang;
  entry.vector = std::move(vector);
  partitions_[lang].entries.push_back(std::move(entry));
  frozen_ = false;
}

void VectorStore::freeze() {
  for (auto& [lang, part] : partitions_) {
    std::sort(part.entries.begin(), part.entries.end(),
              [](const IndexedVector& a, const IndexedVector& b) {
                return a.key < b.key;
              });
    ReferenceVector ref;
    ref.language = lang;
    ref.source_key = part.entries.front().key;
    ref.vector = part.entries.front().vector;
    part.ref = std::move(ref);

    for (IndexedVector& e : part.entries)
      e.cos_sim_to_ref =
          cosine_similarity(e.vector.data(), part.ref->vector.data(), gamma_);

    part.alpha_order.resize(part.entries.size());
    for (std::uint32_t i = 0; i < part.alpha_order.size(); ++i)
      part.alpha_order[i] = i;
    std::sort(part.alpha_order.begin(), part.alpha_order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                const IndexedVector& ea = part.entries[a];
                const IndexedVector& eb = part.entries[b];
                if (ea.cos_sim_to_ref != eb.cos_sim_to_ref)
                  return ea.cos_sim_to_ref < eb.cos_sim_to_ref;
                return ea.key < eb.key;
              });
  }
  frozen_ = true;
}

std::size_t VectorStore::size() const {
  std::size_t n = 0;
  for (const auto& [lang, part] : partitions_) n += part.entries.size();
  return n;
}

std::size_t VectorStore::size(Language lang) const {
  const Partition* part = partition(lang);
  return part ? part->entries.size() : 0;
}

std::vector<Language> VectorStore::languages() const {
  std::vector<Language> out;
  for (const auto& [lang, part] : partitions_)
    if (!part.entries.empty()) out.push_back(lang);
  return out;
}

const VectorStore::Partition* VectorStore::partition(Language lang) const {
  const auto it = partitions_.find(lang);
  return it == partitions_.end() ? nullptr : &it->second;
}

const ReferenceVector& VectorStore::reference(Language lang) const {
  const Partition* part = partition(lang);
  if (!part || part->entries.empty())
    throw std::runtime_error(std::string("no entries for language ") +
                             std::string(language_name(lang)));
  if (!frozen_ || !part->ref)
    throw std::runtime_error("store not frozen: reference not chosen yet");
  return *part->ref;
}

std::vector<PivotMatch> VectorStore::topk_by_pivot(float alpha, std::size_t k,
                                                   Language lang) const {
  if (!frozen_) throw std::runtime_error("store not frozen");
  const Partition* part = partition(lang);
  if (!part || part->entries.empty())
    throw std::runtime_error(std::string("no entries for language ") +
                             std::string(language_name(lang)));

  const auto& order = part->alpha_order;
  const auto& entries = part->entries;
  const auto alpha_at = [&](std::size_t pos) {
    return entries[order[pos]].cos_sim_to_ref;
  };

  // First position with alpha' >= alpha.
  std::size_t lo = 0, hi = order.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (alpha_at(mid) < alpha) lo = mid + 1;
    else hi = mid;
  }

  std::vector<PivotMatch> out;
  out.reserve(std::min(k, order.size()));
  // Two-pointer expansion in waves of equal distance. Distinct alpha' values
  // can round to the same float distance, so each wave gathers every entry
  // whose distance ties (from both sides) and orders the wave by key before
  // it crosses the K boundary.
  std::ptrdiff_t left = static_cast<std::ptrdiff_t>(lo) - 1;
  std::size_t right = lo;
  std::vector<const IndexedVector*> wave;
  while (out.size() < k && (left >= 0 || right < order.size())) {
    const float dl = left >= 0 ? alpha - alpha_at(static_cast<std::size_t>(left))
                               : std::numeric_limits<float>::infinity();
    const float dr = right < order.size() ? alpha_at(right) - alpha
                                          : std::numeric_limits<float>::infinity();
    const float d = std::min(dl, dr);

    wave.clear();
    while (left >= 0 && alpha - alpha_at(static_cast<std::size_t>(left)) == d) {
      wave.push_back(&entries[order[static_cast<std::size_t>(left)]]);
      --left;
    }
    while (right < order.size() && alpha_at(right) - alpha == d) {
      wave.push_back(&entries[order[right]]);
      ++right;
    }
    std::sort(wave.begin(), wave.end(),
              [](const IndexedVector* a, const IndexedVector* b) {
                return a->key < b->key;
              });
    for (const IndexedVector* e : wave) {
      if (out.size() >= k) break;
      out.push_back(PivotMatch{e, d});
    }
  }
  return out;
}

std::vector<SimMatch> VectorStore::topk_exact(const DocVector& query,
                                              std::size_t k, Language lang) const {
  if (!frozen_) throw std::runtime_error("store not frozen");
  const Partition* part = partition(lang);
  if (!part || part->entries.empty())
    throw std::runtime_error(std::string("no entries for language ") +
                             std::string(language_name(lang)));
  if (query.size() != gamma_)
    throw std::invalid_argument("query length does not match store gamma");

  std::vector<SimMatch> all;
  all.reserve(part->entries.size());
  for (const IndexedVector& e : part->entries) {
    all.push_back(SimMatch{
        &e, cosine_similarity(query.data(), e.vector.data(), gamma_)});
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take),
                    all.end(), [](const SimMatch& a, const SimMatch& b) {
                      if (a.similarity != b.similarity)
                        return a.similarity > b.similarity;
                      return a.entry->key < b.entry->key;
                    });
  all.resize(take);
  return all;
}

std::span<const IndexedVector> VectorStore::entries(Language lang) const {
  const Partition* part = partition(lang);
  if (!part) return {};
  return {part->entries.data(), part->entries.size()};
}

const IndexedVector* VectorStore::find(FragKey key) const {
  for (const auto& [lang, part] : partitions_) {
    if (frozen_) {
      const auto it = std::lower_bound(
          part.entries.begin(), part.entries.end(), key,
          [](const IndexedVector& e, FragKey k) { return e.key < k; });
      if (it != part.entries.end() && it->key == key) return &*it;
    } else {
      for (const IndexedVector& e : part.entries)
        if (e.key == key) return &e;
    }
  }
  return nullptr;
}

void VectorStore::set_score(FragKey key, ScoreRecord record) {
  scores_[key] = std::move(record);
}

const ScoreRecord* VectorStore::score_for(FragKey key) const {
  const auto it = scores_.find(key);
  return it == scores_.end() ? nullptr : &it->second;
}

float VectorStore::max_alpha_deviation() const {
  float worst = 0.0f;
  for (const auto& [lang, part] : partitions_) {
    if (!part.ref) continue;
    for (const IndexedVector& e : part.entries) {
      const float again =
          cosine_similarity(e.vector.data(), part.ref->vector.data(), gamma_);
      worst = std::max(worst, std::abs(again - e.cos_sim_to_ref));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void VectorStore::save(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  if (!frozen_) throw std::runtime_error("cannot save an unfrozen store");
  fs::create_directories(dir);

  std::ofstream vec(dir / "vectors.bin", std::ios::binary | std::ios::trunc);
  std::ofstream idx(dir / "index.jsonl", std::ios::binary | std::ios::trunc);
  if (!vec || !idx) throw std::runtime_error("cannot write store files in " + dir.string());

  std::uint64_t row = 0;
  for (const auto& [lang, part] : partitions_) {
    for (const IndexedVector& e : part.entries) {
      vec.write(reinterpret_cast<const char*>(e.vector.data()),
                static_cast<std::streamsize>(gamma_ * sizeof(float)));
      const nlohmann::json j{
          {"cosSim", e.cos_sim_to_ref},
          {"fragId", e.key.frag_id},
          {"language", language_name(e.language)},
          {"postId", e.key.post_id},
          {"row", row},
      };
      idx << j.dump() << '\n';
      ++row;
    }
  }

  nlohmann::json refs = nlohmann::json::array();
  for (const auto& [lang, part] : partitions_) {
    if (!part.ref) continue;
    refs.push_back(nlohmann::json{
        {"fragId", part.ref->source_key.frag_id},
        {"language", language_name(lang)},
        {"postId", part.ref->source_key.post_id},
        {"vector", part.ref->vector},
    });
  }
  const nlohmann::json ref_doc{{"gamma", gamma_}, {"references", refs}, {"version", 1}};
  std::ofstream ref(dir / "reference.json", std::ios::binary | std::ios::trunc);
  if (!ref) throw std::runtime_error("cannot write reference.json in " + dir.string());
  ref << ref_doc.dump(2) << '\n';

  if (!scores_.empty()) {
    std::ofstream sc(dir / "scores.jsonl", std::ios::binary | std::ios::trunc);
    if (!sc) throw std::runtime_error("cannot write scores.jsonl in " + dir.string());
    for (const auto& [key, record] : scores_) {
      const nlohmann::json j{
          {"delta", record.delta},
          {"fragId", key.frag_id},
          {"postId", key.post_id},
          {"title", record.title},
      };
      sc << j.dump() << '\n';
    }
  }
}

VectorStore VectorStore::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path ref_path = dir / "reference.json";
  const fs::path idx_path = dir / "index.jsonl";
  const fs::path vec_path = dir / "vectors.bin";
  for (const fs::path& p : {ref_path, idx_path, vec_path}) {
    if (!fs::exists(p))
      throw std::runtime_error("store missing required file: " + p.string());
  }

  std::ifstream ref_in(ref_path);
  nlohmann::json ref_doc;
  try {
    ref_in >> ref_doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt reference.json: " + std::string(e.what()));
  }
  if (!ref_doc.contains("gamma") || !ref_doc.contains("references"))
    throw std::runtime_error("corrupt reference.json: missing fields");
  const auto gamma = ref_doc.at("gamma").get<std::uint32_t>();

  VectorStore store(gamma);

  std::ifstream vec_in(vec_path, std::ios::binary);
  std::ifstream idx_in(idx_path);
  std::string line;
  std::uint64_t expected_row = 0;
  while (std::getline(idx_in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("corrupt index.jsonl: " + std::string(e.what()));
    }
    const auto row = j.at("row").get<std::uint64_t>();
    if (row != expected_row)
      throw std::runtime_error("index.jsonl rows out of order");
    ++expected_row;
    const auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang) throw std::runtime_error("index.jsonl has unknown language");
    DocVector v(gamma);
    vec_in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(gamma * sizeof(float)));
    if (!vec_in) throw std::runtime_error("vectors.bin truncated");
    store.insert(FragKey{j.at("postId").get<std::int64_t>(),
                         j.at("fragId").get<std::int32_t>()},
                 *lang, std::move(v));
  }
  if (store.size() == 0) throw std::runtime_error("store is empty: " + dir.string());
  store.freeze();

  // Cross-check the recorded references against the recomputed ones.
  for (const auto& r : ref_doc.at("references")) {
    const auto lang = parse_language(r.at("language").get<std::string>());
    if (!lang) throw std::runtime_error("reference.json has unknown language");
    const ReferenceVector& chosen = store.reference(*lang);
    if (chosen.source_key.post_id != r.at("postId").get<std::int64_t>() ||
        chosen.source_key.frag_id != r.at("fragId").get<std::int32_t>())
      throw std::runtime_error("reference.json disagrees with index contents");
  }

  const fs::path score_path = dir / "scores.jsonl";
  if (fs::exists(score_path)) {
    std::ifstream sc(score_path);
    while (std::getline(sc, line)) {
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corrupt scores.jsonl: " + std::string(e.what()));
      }
      ScoreRecord record;
      record.delta = j.at("delta").get<int>();
      record.title = j.value("title", std::string());
      store.set_score(FragKey{j.at("postId").get<std::int64_t>(),
                              j.at("fragId").get<std::int32_t>()},
                      std::move(record));
    }
  }
  return store;
}

double similarity_threshold(Language lang,
                            const std::map<Language, double>& overrides) {
  if (const auto it = overrides.find(lang); it != overrides.end())
    return it->second;
  switch (lang) {
    case Language::C: return 0.963;
    case Language::CSharp: return 0.954;
    case Language::Java: return 0.97;
    case Language::JavaScript: return 0.967;
    case Language::Python: return 0.9617;
  }
  throw std::invalid_argument("unknown language for similarity threshold");
}

}  // namespace coderev
