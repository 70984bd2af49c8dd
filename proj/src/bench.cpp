#include "coderev/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "coderev/preproc.hpp"

namespace coderev {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point begin, Clock::time_point end) {
  return std::chrono::duration<double, std::milli>(end - begin).count();
}

LatencyStats summarize(std::vector<double> samples) {
  LatencyStats stats;
  if (samples.empty()) return stats;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  stats.median_ms = n % 2 == 1 ? samples[n / 2]
                               : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  double sum = 0.0;
  for (double s : samples) sum += s;
  stats.mean_ms = sum / static_cast<double>(n);
  stats.max_ms = samples.back();
  return stats;
}

std::vector<std::uint64_t> sorted_hash_set(const Fingerprint& fp) {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(fp.hashes.size());
  for (const auto& [h, pos] : fp.hashes) hashes.push_back(h);
  std::sort(hashes.begin(), hashes.end());
  hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
  return hashes;
}

double containment(const std::vector<std::uint64_t>& query,
                   const std::vector<std::uint64_t>& stored) {
  if (query.empty()) return 0.0;
  std::size_t inter = 0;
  auto ia = query.begin();
  auto ib = stored.begin();
  while (ia != query.end() && ib != stored.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++inter; ++ia; ++ib; }
  }
  return static_cast<double>(inter) / static_cast<double>(query.size());
}

std::uint64_t file_bytes(const std::filesystem::path& p) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(p, ec);
  return ec ? 0 : static_cast<std::uint64_t>(size);
}

}  // namespace

nlohmann::json bench_report_to_json(const BenchReport& r) {
  return nlohmann::json{
      {"fragmentCount", r.fragment_count},
      {"gamma", r.gamma},
      {"k", r.k},
      {"w", r.w},
      {"fingerprintStoreBytes", r.fingerprint_store_bytes},
      {"vectorStoreBytes", r.vector_store_bytes},
      {"storageRatio", r.storage_ratio},
      {"storageReductionPct", r.storage_reduction_pct},
      {"fingerprintMatchMs",
       {{"median", r.fingerprint_match.median_ms},
        {"mean", r.fingerprint_match.mean_ms},
        {"max", r.fingerprint_match.max_ms}}},
      {"pivotRetrievalMs",
       {{"median", r.pivot_retrieval.median_ms},
        {"mean", r.pivot_retrieval.mean_ms},
        {"max", r.pivot_retrieval.max_ms}}},
      {"latencyRatio", r.latency_ratio},
      {"timeReductionPct", r.time_reduction_pct},
      {"selfQueryFoundFingerprint", r.self_query_found_fingerprint},
      {"selfQueryFoundPivot", r.self_query_found_pivot},
  };
}

BenchReport bench_compare(const VectorStore& store, Language lang,
                          const std::vector<BenchFragment>& fragments,
                          const std::vector<BenchQuery>& queries,
                          const std::filesystem::path& work_dir,
                          const BenchParams& params) {
  if (fragments.empty()) throw std::runtime_error("bench: empty corpus");
  if (queries.empty()) throw std::runtime_error("bench: no queries");
  if (!store.frozen()) throw std::runtime_error("bench: store not frozen");

  namespace fs = std::filesystem;
  fs::create_directories(work_dir);

  // Fingerprint store on disk plus the in-memory sorted hash sets the linear
  // matcher scans.
  std::vector<std::vector<std::uint64_t>> stored_sets;
  stored_sets.reserve(fragments.size());
  const fs::path fp_path = work_dir / "fingerprints.jsonl";
  {
    std::ofstream out(fp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + fp_path.string());
    for (const BenchFragment& frag : fragments) {
      const std::string normalized = normalize_code(frag.code, lang);
      if (normalized.size() < params.k)
        throw std::runtime_error("bench fragment below gram size");
      const Fingerprint fp = fingerprint(normalized, params.k, params.w);
      nlohmann::json hashes = nlohmann::json::array();
      for (const auto& [h, pos] : fp.hashes) hashes.push_back(h);
      const nlohmann::json j{
          {"fragId", frag.key.frag_id},
          {"hashes", hashes},
          {"k", params.k},
          {"postId", frag.key.post_id},
          {"w", params.w},
      };
      out << j.dump() << '\n';
      stored_sets.push_back(sorted_hash_set(fp));
    }
  }

  // Vector store files under the same work dir so both sides are measured on
  // identical storage.
  const fs::path store_dir = work_dir / "store";
  store.save(store_dir);

  BenchReport report;
  report.fragment_count = fragments.size();
  report.gamma = store.gamma();
  report.k = params.k;
  report.w = params.w;
  report.fingerprint_store_bytes = file_bytes(fp_path);
  report.vector_store_bytes = file_bytes(store_dir / "vectors.bin") +
                              file_bytes(store_dir / "index.jsonl") +
                              file_bytes(store_dir / "reference.json");
  report.storage_ratio =
      static_cast<double>(report.vector_store_bytes) /
      static_cast<double>(std::max<std::uint64_t>(1, report.fingerprint_store_bytes));
  report.storage_reduction_pct = (1.0 - report.storage_ratio) * 100.0;

  // Query fingerprints are prepared outside the timed region; the comparison
  // is retrieval work, not representation construction.
  std::vector<std::vector<std::uint64_t>> query_sets;
  query_sets.reserve(queries.size());
  for (const BenchQuery& q : queries) {
    const std::string normalized = normalize_code(q.code, lang);
    if (normalized.size() < params.k)
      throw std::runtime_error("bench query below gram size");
    query_sets.push_back(sorted_hash_set(fingerprint(normalized, params.k, params.w)));
  }

  const ReferenceVector& ref = store.reference(lang);

  std::vector<double> fp_samples, pivot_samples;
  fp_samples.reserve(params.runs);
  pivot_samples.reserve(params.runs);
  double best_self_score = 0.0;
  float best_self_distance = 1.0f;

  for (std::size_t run = 0; run < params.runs; ++run) {
    const std::size_t qi = run % queries.size();

    // Route A: exhaustive fingerprint matching.
    {
      const auto begin = Clock::now();
      std::vector<std::pair<double, std::size_t>> top;
      for (std::size_t i = 0; i < stored_sets.size(); ++i) {
        const double score = containment(query_sets[qi], stored_sets[i]);
        top.emplace_back(score, i);
      }
      std::partial_sort(top.begin(),
                        top.begin() + static_cast<std::ptrdiff_t>(
                                          std::min(params.top_k, top.size())),
                        top.end(), [](const auto& a, const auto& b) {
                          return a.first > b.first;
                        });
      const auto end = Clock::now();
      fp_samples.push_back(elapsed_ms(begin, end));
      if (qi == 0 && !top.empty())
        best_self_score = std::max(best_self_score, top.front().first);
    }

    // Route B: scalar pivot retrieval.
    {
      const auto begin = Clock::now();
      const float alpha = cosine_similarity(
          queries[qi].vector.data(), ref.vector.data(), ref.vector.size());
      const std::vector<PivotMatch> matches =
          store.topk_by_pivot(alpha, params.top_k, lang);
      const auto end = Clock::now();
      pivot_samples.push_back(elapsed_ms(begin, end));
      if (qi == 0 && !matches.empty())
        best_self_distance = std::min(best_self_distance, matches.front().distance);
    }
  }

  report.fingerprint_match = summarize(std::move(fp_samples));
  report.pivot_retrieval = summarize(std::move(pivot_samples));
  report.latency_ratio =
      report.pivot_retrieval.median_ms /
      std::max(1e-9, report.fingerprint_match.median_ms);
  report.time_reduction_pct = (1.0 - report.latency_ratio) * 100.0;
  report.self_query_found_fingerprint = best_self_score >= 1.0;
  report.self_query_found_pivot = best_self_distance <= 0.0f;
  return report;
}

}  // namespace coderev
