#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coderev/store.hpp"
#include "coderev/winnow.hpp"

namespace coderev {

// Speed/storage comparison between the two architectures: winnowing
// fingerprints matched by exhaustive linear scan (the predecessor design,
// deliberately unoptimized) versus fixed-size vectors retrieved through the
// scalar pivot index.

struct BenchFragment {
  FragKey key;
  std::string code;
};

struct BenchQuery {
  std::string code;
  DocVector vector;
};

struct BenchParams {
  std::uint32_t k = 5;       // gram size
  std::uint32_t w = 4;       // window size
  std::size_t top_k = 5;     // matches fetched per query by both routes
  std::size_t runs = 20;     // timed query executions per route
};

struct LatencyStats {
  double median_ms = 0.0;
  double mean_ms = 0.0;
  double max_ms = 0.0;
};

struct BenchReport {
  std::size_t fragment_count = 0;
  std::uint32_t gamma = 0;
  std::uint32_t k = 0;
  std::uint32_t w = 0;
  std::uint64_t fingerprint_store_bytes = 0;
  std::uint64_t vector_store_bytes = 0;
  double storage_ratio = 0.0;          // vector / fingerprint
  double storage_reduction_pct = 0.0;  // (1 - ratio) * 100
  LatencyStats fingerprint_match;
  LatencyStats pivot_retrieval;
  double latency_ratio = 0.0;          // pivot / fingerprint medians
  double time_reduction_pct = 0.0;
  bool self_query_found_fingerprint = false;
  bool self_query_found_pivot = false;
};

nlohmann::json bench_report_to_json(const BenchReport& report);

// Builds the fingerprint store over the fragments, writes both stores under
// work_dir (fingerprints.jsonl next to the vector store files), then times
// the two retrieval routes over the queries. The store must be frozen and
// hold vectors for exactly the given fragments. Throws on an empty corpus.
BenchReport bench_compare(const VectorStore& store, Language lang,
                          const std::vector<BenchFragment>& fragments,
                          const std::vector<BenchQuery>& queries,
                          const std::filesystem::path& work_dir,
                          const BenchParams& params = {});

}  // namespace coderev
