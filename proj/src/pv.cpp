#include "coderev/pv.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "coderev/kernels.hpp"
#include "coderev/pv_math.hpp"

namespace coderev {

using pvmath::SplitMix64;

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

void TrainingConfig::validate() const {
  if (vector_size < 2) throw std::invalid_argument("vector_size must be >= 2");
  if (epochs > 100000) throw std::invalid_argument("epochs out of range");
  if (max_samples == 0) throw std::invalid_argument("max_samples must be positive");
  if (window == 0) throw std::invalid_argument("window must be positive");
  if (initial_lr <= 0.0f) throw std::invalid_argument("initial_lr must be positive");
  if (final_lr <= 0.0f || final_lr > initial_lr)
    throw std::invalid_argument("final_lr must be in (0, initial_lr]");
}

void PvModel::rebuild_sampling_cdf() {
  sampling_cdf.clear();
  sampling_cdf.reserve(vocab.size());
  double acc = 0.0;
  for (std::uint64_t count : vocab.counts) {
    acc += std::pow(static_cast<double>(count), 0.75);
    sampling_cdf.push_back(acc);
  }
}

namespace {

constexpr std::uint64_t kInferSeedSalt = 0xC2B2AE3D27D4EB4FULL;

std::uint32_t sample_token(const std::vector<double>& cdf, SplitMix64& rng) {
  const double r = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
  return static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - cdf.begin(),
                               static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

std::size_t build_slots(std::uint32_t target, std::uint32_t negatives,
                        const std::vector<double>& cdf, SplitMix64& rng,
                        std::uint32_t* slots, int* labels) {
  slots[0] = target;
  labels[0] = 1;
  std::size_t m = 1;
  for (std::uint32_t i = 0; i < negatives; ++i) {
    const std::uint32_t s = sample_token(cdf, rng);
    if (s == target) continue;  // drawing the positive contributes nothing
    slots[m] = s;
    labels[m] = 0;
    ++m;
  }
  return m;
}

// One negative-sampling update of predictor h against the output rows in
// slots[0..m). Returns the event loss. Output rows are frozen at inference.
float ns_event(float* h, std::size_t dim, Matrix& out, const std::uint32_t* slots,
               const int* labels, std::size_t m, float lr, bool update_rows,
               float* coef, float* h_err) {
  const float loss = pvmath::ns_forward<float>(
      h, dim, labels, m, [&](std::size_t j) { return out.row(slots[j]); }, coef);
  std::fill(h_err, h_err + dim, 0.0f);
  for (std::size_t j = 0; j < m; ++j) {
    const float g = -lr * coef[j];
    float* row = out.row(slots[j]);
    kernels::axpy(g, row, h_err, dim);  // reads the pre-update row
    if (update_rows) kernels::axpy(g, h, row, dim);
  }
  kernels::axpy(1.0f, h_err, h, dim);
  return loss;
}

Vocabulary build_vocabulary(const CorpusManifest& corpus, std::size_t doc_limit,
                            std::uint32_t min_token_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (std::size_t d = 0; d < doc_limit; ++d) {
    for (const std::string& tok : corpus.documents[d].tokens.tokens)
      counts[tok]++;
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [tok, count] : counts) {
    if (count >= std::max<std::uint64_t>(1, min_token_count))
      kept.emplace_back(tok, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.tokens.reserve(kept.size());
  vocab.counts.reserve(kept.size());
  for (auto& [tok, count] : kept) {
    vocab.index.emplace(tok, static_cast<std::uint32_t>(vocab.tokens.size()));
    vocab.tokens.push_back(tok);
    vocab.counts.push_back(count);
  }
  return vocab;
}

std::vector<std::vector<std::uint32_t>> map_documents(
    const CorpusManifest& corpus, std::size_t doc_limit, const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> ids(doc_limit);
  for (std::size_t d = 0; d < doc_limit; ++d) {
    const auto& tokens = corpus.documents[d].tokens.tokens;
    ids[d].reserve(tokens.size());
    for (const std::string& tok : tokens) {
      const auto it = vocab.index.find(tok);
      if (it != vocab.index.end()) ids[d].push_back(it->second);
    }
  }
  return ids;
}

void fill_uniform(Matrix& m, SplitMix64& rng, float bound) {
  for (float& v : m.data) v = rng.uniform_float(-bound, bound);
}

struct EventBuffers {
  std::vector<std::uint32_t> slots;
  std::vector<int> labels;
  std::vector<float> coef;
  std::vector<float> h_err;

  EventBuffers(std::uint32_t negatives, std::uint32_t dim)
      : slots(negatives + 1), labels(negatives + 1), coef(negatives + 1),
        h_err(dim) {}
};

// Trains the shard of documents [begin, end); shared matrices are updated
// without locking, which is safe only because single-threaded mode passes the
// whole range.
void train_range(PvModel& model, const std::vector<std::vector<std::uint32_t>>& docs,
                 std::size_t begin, std::size_t end, std::uint32_t epoch,
                 std::uint64_t rng_salt, std::atomic<std::uint64_t>& docs_done,
                 std::uint64_t total_doc_visits, double& loss_out,
                 std::uint64_t& events_out) {
  const TrainingConfig& cfg = model.config;
  const std::uint32_t dim = cfg.vector_size;
  SplitMix64 rng(static_cast<std::uint64_t>(cfg.seed) * 0x9E3779B97F4A7C15ULL +
                 rng_salt + epoch * 0x100000001B3ULL);
  EventBuffers buf(cfg.negatives, dim);
  double loss = 0.0;
  std::uint64_t events = 0;

  for (std::size_t d = begin; d < end; ++d) {
    const std::uint64_t done = docs_done.fetch_add(1);
    const double progress =
        static_cast<double>(done) / static_cast<double>(total_doc_visits);
    const float lr =
        cfg.initial_lr +
        static_cast<float>(progress) * (cfg.final_lr - cfg.initial_lr);

    const std::vector<std::uint32_t>& ids = docs[d];
    float* doc_vec = model.doc_vectors.row(static_cast<std::uint32_t>(d));
    for (std::size_t t = 0; t < ids.size(); ++t) {
      // Document vector predicts the current token.
      std::size_t m = build_slots(ids[t], cfg.negatives, model.sampling_cdf, rng,
                                  buf.slots.data(), buf.labels.data());
      loss += ns_event(doc_vec, dim, model.output_weights, buf.slots.data(),
                       buf.labels.data(), m, lr, true, buf.coef.data(),
                       buf.h_err.data());
      ++events;

      // Context words predict the current token (skip-gram over a reduced
      // window), keeping the word vectors live.
      const std::size_t span = 1 + rng.below(cfg.window);
      const std::size_t lo = t >= span ? t - span : 0;
      const std::size_t hi = std::min(ids.size(), t + span + 1);
      for (std::size_t c = lo; c < hi; ++c) {
        if (c == t) continue;
        m = build_slots(ids[t], cfg.negatives, model.sampling_cdf, rng,
                        buf.slots.data(), buf.labels.data());
        loss += ns_event(model.word_vectors.row(ids[c]), dim,
                         model.output_weights, buf.slots.data(),
                         buf.labels.data(), m, lr, true, buf.coef.data(),
                         buf.h_err.data());
        ++events;
      }
    }
  }
  loss_out = loss;
  events_out = events;
}

}  // namespace

PvModel train_model(const CorpusManifest& corpus, const TrainingConfig& config,
                    TrainStats* stats, unsigned threads) {
  config.validate();
  if (corpus.documents.empty()) throw std::runtime_error("empty training corpus");

  const std::size_t doc_count =
      std::min<std::size_t>(corpus.documents.size(), config.max_samples);

  PvModel model;
  model.language = corpus.language;
  model.config = config;
  model.vocab = build_vocabulary(corpus, doc_count, config.min_token_count);
  if (model.vocab.size() == 0)
    throw std::runtime_error("vocabulary empty after min-count filter");
  model.rebuild_sampling_cdf();

  const auto vocab_rows = static_cast<std::uint32_t>(model.vocab.size());
  const float bound = 0.5f / static_cast<float>(config.vector_size);
  SplitMix64 init_rng(static_cast<std::uint64_t>(config.seed));
  model.word_vectors.resize(vocab_rows, config.vector_size);
  model.output_weights.resize(vocab_rows, config.vector_size);
  model.doc_vectors.resize(static_cast<std::uint32_t>(doc_count),
                           config.vector_size);
  fill_uniform(model.word_vectors, init_rng, bound);
  fill_uniform(model.doc_vectors, init_rng, bound);
  // output_weights stay zero

  const auto docs = map_documents(corpus, doc_count, model.vocab);

  if (stats) *stats = TrainStats{};
  std::atomic<std::uint64_t> docs_done{0};
  const std::uint64_t total_visits =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(config.epochs) * doc_count);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(doc_count)));
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::uint64_t epoch_events = 0;
    if (workers == 1) {
      train_range(model, docs, 0, doc_count, epoch, 0, docs_done, total_visits,
                  epoch_loss, epoch_events);
    } else {
      std::vector<std::thread> pool;
      std::vector<double> losses(workers, 0.0);
      std::vector<std::uint64_t> events(workers, 0);
      const std::size_t chunk = (doc_count + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min<std::size_t>(w * chunk, doc_count);
        const std::size_t end = std::min<std::size_t>(begin + chunk, doc_count);
        pool.emplace_back(train_range, std::ref(model), std::cref(docs), begin,
                          end, epoch, static_cast<std::uint64_t>(w + 1) << 32,
                          std::ref(docs_done), total_visits,
                          std::ref(losses[w]), std::ref(events[w]));
      }
      for (auto& t : pool) t.join();
      for (unsigned w = 0; w < workers; ++w) {
        epoch_loss += losses[w];
        epoch_events += events[w];
      }
    }
    if (stats) {
      stats->epoch_loss.push_back(
          epoch_events ? epoch_loss / static_cast<double>(epoch_events) : 0.0);
      stats->events += epoch_events;
    }
  }
  return model;
}

InferResult infer_vector(const PvModel& model, const TokenSequence& tokens,
                         std::uint32_t infer_epochs) {
  const TrainingConfig& cfg = model.config;
  const std::uint32_t dim = cfg.vector_size;

  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.tokens.size());
  for (const std::string& tok : tokens.tokens) {
    const auto it = model.vocab.index.find(tok);
    if (it != model.vocab.index.end()) ids.push_back(it->second);
  }

  SplitMix64 rng(static_cast<std::uint64_t>(cfg.seed) ^ kInferSeedSalt);
  InferResult result;
  result.vector.resize(dim);
  const float bound = 0.5f / static_cast<float>(dim);
  for (float& v : result.vector) v = rng.uniform_float(-bound, bound);

  if (ids.empty()) {
    result.low_confidence = true;
    return result;
  }

  EventBuffers buf(cfg.negatives, dim);
  // The output weights are logically frozen; ns_event never writes them when
  // update_rows is false, so the const_cast stays read-only.
  Matrix& out = const_cast<Matrix&>(model.output_weights);
  for (std::uint32_t epoch = 0; epoch < infer_epochs; ++epoch) {
    const float lr = cfg.initial_lr +
                     (cfg.final_lr - cfg.initial_lr) *
                         (static_cast<float>(epoch) /
                          static_cast<float>(std::max(1u, infer_epochs)));
    for (std::uint32_t id : ids) {
      const std::size_t m = build_slots(id, cfg.negatives, model.sampling_cdf,
                                        rng, buf.slots.data(), buf.labels.data());
      ns_event(result.vector.data(), dim, out, buf.slots.data(),
               buf.labels.data(), m, lr, false, buf.coef.data(),
               buf.h_err.data());
    }
  }
  return result;
}

float cosine_similarity(const float* a, const float* b, std::size_t n) {
  const float dot = kernels::dot(a, b, n);
  const float na = kernels::dot(a, a, n);
  const float nb = kernels::dot(b, b, n);
  if (na == 0.0f || nb == 0.0f)
    throw std::invalid_argument("undefined similarity: zero vector");
  const float sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(sim, -1.0f, 1.0f);
}

float cosine_similarity(const DocVector& a, const DocVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine: length mismatch");
  if (a.empty()) throw std::invalid_argument("cosine: empty vectors");
  return cosine_similarity(a.data(), b.data(), a.size());
}

// ---------------------------------------------------------------------------
// Model container
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'C', 'R', 'P', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T* value, const char* what) {
  in.read(reinterpret_cast<char*>(value), sizeof(T));
  if (!in) throw std::runtime_error(std::string("model file truncated reading ") + what);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  write_pod(out, m.rows);
  write_pod(out, m.cols);
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
}

void read_matrix(std::istream& in, Matrix* m, const char* what) {
  read_pod(in, &m->rows, what);
  read_pod(in, &m->cols, what);
  const std::uint64_t cells =
      static_cast<std::uint64_t>(m->rows) * static_cast<std::uint64_t>(m->cols);
  if (cells > (1ULL << 32))
    throw std::runtime_error(std::string("model file corrupt: absurd matrix in ") + what);
  m->data.resize(cells);
  in.read(reinterpret_cast<char*>(m->data.data()),
          static_cast<std::streamsize>(cells * sizeof(float)));
  if (!in) throw std::runtime_error(std::string("model file truncated reading ") + what);
}

}  // namespace

void save_model(const PvModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path.string());
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint8_t>(model.language));
  const TrainingConfig& c = model.config;
  write_pod(out, c.vector_size);
  write_pod(out, c.epochs);
  write_pod(out, c.max_samples);
  write_pod(out, c.window);
  write_pod(out, c.negatives);
  write_pod(out, c.initial_lr);
  write_pod(out, c.final_lr);
  write_pod(out, c.min_token_count);
  write_pod(out, c.seed);
  const auto vocab_size = static_cast<std::uint32_t>(model.vocab.size());
  write_pod(out, vocab_size);
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    const std::string& tok = model.vocab.tokens[i];
    write_pod(out, static_cast<std::uint32_t>(tok.size()));
    out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
    write_pod(out, model.vocab.counts[i]);
  }
  write_matrix(out, model.word_vectors);
  write_matrix(out, model.output_weights);
  write_matrix(out, model.doc_vectors);
  if (!out) throw std::runtime_error("failed writing model file: " + path.string());
}

PvModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a model file (bad magic): " + path.string());
  std::uint32_t version = 0;
  read_pod(in, &version, "version");
  if (version != kVersion)
    throw std::runtime_error("unsupported model version " + std::to_string(version));

  PvModel model;
  std::uint8_t lang = 0;
  read_pod(in, &lang, "language");
  if (lang > static_cast<std::uint8_t>(Language::Python))
    throw std::runtime_error("model file corrupt: bad language byte");
  model.language = static_cast<Language>(lang);
  TrainingConfig& c = model.config;
  read_pod(in, &c.vector_size, "config");
  read_pod(in, &c.epochs, "config");
  read_pod(in, &c.max_samples, "config");
  read_pod(in, &c.window, "config");
  read_pod(in, &c.negatives, "config");
  read_pod(in, &c.initial_lr, "config");
  read_pod(in, &c.final_lr, "config");
  read_pod(in, &c.min_token_count, "config");
  read_pod(in, &c.seed, "config");

  std::uint32_t vocab_size = 0;
  read_pod(in, &vocab_size, "vocabulary size");
  model.vocab.tokens.reserve(vocab_size);
  model.vocab.counts.reserve(vocab_size);
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    std::uint32_t len = 0;
    read_pod(in, &len, "vocabulary entry");
    if (len > (1u << 20))
      throw std::runtime_error("model file corrupt: absurd token length");
    std::string tok(len, '\0');
    in.read(tok.data(), len);
    if (!in) throw std::runtime_error("model file truncated reading vocabulary");
    std::uint64_t count = 0;
    read_pod(in, &count, "vocabulary count");
    model.vocab.index.emplace(tok, i);
    model.vocab.tokens.push_back(std::move(tok));
    model.vocab.counts.push_back(count);
  }
  read_matrix(in, &model.word_vectors, "word vectors");
  read_matrix(in, &model.output_weights, "output weights");
  read_matrix(in, &model.doc_vectors, "doc vectors");
  in.peek();
  if (!in.eof())
    throw std::runtime_error("model file has trailing bytes: " + path.string());
  model.rebuild_sampling_cdf();
  return model;
}

}  // namespace coderev
