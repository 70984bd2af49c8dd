#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "coderev/ingest.hpp"
#include "coderev/language.hpp"
#include "coderev/preproc.hpp"

namespace coderev {

// Training parameters for the distributed bag-of-words paragraph-vector
// model with negative sampling. Word vectors train skip-gram style alongside
// the document vectors (that is what window controls).
struct TrainingConfig {
  std::uint32_t vector_size = 100;      // embedding dimension
  std::uint32_t epochs = 20;            // training passes
  std::uint32_t max_samples = 1000000;  // cap on training documents
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  float initial_lr = 0.025f;
  float final_lr = 0.0001f;
  std::uint32_t min_token_count = 2;
  std::int64_t seed = 1;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct Vocabulary {
  std::vector<std::string> tokens;        // index order
  std::vector<std::uint64_t> counts;      // parallel to tokens
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return tokens.size(); }
};

struct Matrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<float> data;

  void resize(std::uint32_t r, std::uint32_t c) {
    rows = r;
    cols = c;
    data.assign(static_cast<std::size_t>(r) * c, 0.0f);
  }
  float* row(std::uint32_t r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const float* row(std::uint32_t r) const {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }
};

using DocVector = std::vector<float>;

struct PvModel {
  Language language = Language::Java;
  TrainingConfig config;
  Vocabulary vocab;
  Matrix word_vectors;    // |V| x gamma, skip-gram inputs
  Matrix output_weights;  // |V| x gamma, shared negative-sampling outputs
  Matrix doc_vectors;     // docs x gamma

  // Cumulative unigram^0.75 distribution for negative sampling; derived from
  // vocab counts, rebuilt on load, never serialized.
  std::vector<double> sampling_cdf;
  void rebuild_sampling_cdf();
};

struct TrainStats {
  std::vector<double> epoch_loss;  // mean negative-sampling loss per epoch
  std::uint64_t events = 0;
};

// Trains a model over at most config.max_samples documents. threads == 1 is
// bit-reproducible for a fixed seed; threads > 1 uses lock-free shared
// updates and is only statistically equivalent. Throws on an empty corpus or
// an empty vocabulary after the min-count filter.
PvModel train_model(const CorpusManifest& corpus, const TrainingConfig& config,
                    TrainStats* stats = nullptr, unsigned threads = 1);

struct InferResult {
  DocVector vector;
  bool low_confidence = false;  // no in-vocabulary tokens to fit against
};

// Gradient-fits a fresh document vector against the frozen model. Output
// depends only on (model, tokens, infer_epochs, model seed).
InferResult infer_vector(const PvModel& model, const TokenSequence& tokens,
                         std::uint32_t infer_epochs = 50);

// Standard cosine similarity, clamped to [-1, 1]. Throws on length mismatch
// or an all-zero input.
float cosine_similarity(const DocVector& a, const DocVector& b);
float cosine_similarity(const float* a, const float* b, std::size_t n);

// Versioned binary container (magic, config block, vocabulary, row-major
// little-endian float32 matrices). save/load round-trips bit-exactly.
void save_model(const PvModel& model, const std::filesystem::path& path);
PvModel load_model(const std::filesystem::path& path);

}  // namespace coderev
