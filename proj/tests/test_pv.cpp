#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "coderev/pv.hpp"
#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"

using namespace coderev;

namespace {

TrainingConfig small_config(std::uint32_t gamma, std::uint32_t epochs) {
  TrainingConfig config;
  config.vector_size = gamma;
  config.epochs = epochs;
  config.window = 4;
  config.negatives = 5;
  config.min_token_count = 1;
  config.seed = 99;
  return config;
}

bool models_equal(const PvModel& a, const PvModel& b) {
  return a.vocab.tokens == b.vocab.tokens && a.vocab.counts == b.vocab.counts &&
         a.word_vectors.data == b.word_vectors.data &&
         a.output_weights.data == b.output_weights.data &&
         a.doc_vectors.data == b.doc_vectors.data;
}

}  // namespace

TEST_CASE("doc vector matrix has one row per trained document") {
  const auto corpus = testsupport::synthetic_corpus(10, 30, 1);
  const PvModel model = train_model(corpus, small_config(8, 2));
  CHECK(model.doc_vectors.rows == 10);
  CHECK(model.doc_vectors.cols == 8);
}

TEST_CASE("max_samples truncates the corpus") {
  const auto corpus = testsupport::synthetic_corpus(10, 30, 2);
  TrainingConfig config = small_config(8, 1);
  config.max_samples = 4;
  const PvModel model = train_model(corpus, config);
  CHECK(model.doc_vectors.rows == 4);
}

TEST_CASE("zero epochs leaves the random initialization untouched") {
  const auto corpus = testsupport::synthetic_corpus(6, 20, 3);
  TrainingConfig config = small_config(8, 0);
  const PvModel trained = train_model(corpus, config);

  // output weights start at zero; doc/word vectors stay inside the init range
  for (float v : trained.output_weights.data) CHECK(v == 0.0f);
  const float bound = 0.5f / 8.0f;
  for (float v : trained.doc_vectors.data) {
    CHECK(v >= -bound);
    CHECK(v <= bound);
  }
  // and training again with the same seed reproduces it exactly
  const PvModel again = train_model(corpus, config);
  CHECK(models_equal(trained, again));
}

TEST_CASE("training loss falls from first to final epoch") {
  const auto corpus = testsupport::synthetic_corpus(50, 25, 4);
  TrainStats stats;
  train_model(corpus, small_config(16, 20), &stats);
  REQUIRE(stats.epoch_loss.size() == 20);
  CHECK(stats.epoch_loss.back() < stats.epoch_loss.front());
}

TEST_CASE("training is bit-reproducible with a fixed seed") {
  const auto corpus = testsupport::synthetic_corpus(12, 25, 5);
  const PvModel a = train_model(corpus, small_config(12, 3));
  const PvModel b = train_model(corpus, small_config(12, 3));
  CHECK(models_equal(a, b));
}

TEST_CASE("training errors") {
  CorpusManifest empty;
  empty.language = Language::Java;
  CHECK_THROWS_AS(train_model(empty, small_config(8, 1)), std::runtime_error);

  // every token unique + min count 2 -> empty vocabulary
  CorpusManifest sparse;
  sparse.language = Language::Java;
  CorpusDocument doc;
  doc.doc_id = 0;
  doc.tokens.tokens = {"a", "b", "c"};
  sparse.documents.push_back(doc);
  TrainingConfig config = small_config(8, 1);
  config.min_token_count = 2;
  CHECK_THROWS_AS(train_model(sparse, config), std::runtime_error);

  TrainingConfig bad = small_config(1, 1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TrainingConfig bad_lr = small_config(8, 1);
  bad_lr.final_lr = 1.0f;
  CHECK_THROWS_AS(bad_lr.validate(), std::invalid_argument);
}

TEST_CASE("infer_vector basics") {
  const auto corpus = testsupport::synthetic_corpus(10, 30, 6);
  const PvModel model = train_model(corpus, small_config(12, 5));

  SUBCASE("deterministic for identical input") {
    const TokenSequence tokens = corpus.documents[3].tokens;
    const InferResult a = infer_vector(model, tokens, 20);
    const InferResult b = infer_vector(model, tokens, 20);
    CHECK(a.vector == b.vector);
    CHECK(!a.low_confidence);
  }
  SUBCASE("vector length always matches gamma") {
    for (int d = 0; d < 5; ++d)
      CHECK(infer_vector(model, corpus.documents[d].tokens, 5).vector.size() == 12);
  }
  SUBCASE("all out-of-vocabulary tokens flag low confidence") {
    TokenSequence oov;
    oov.tokens = {"never", "seen", "anywhere"};
    const InferResult r = infer_vector(model, oov, 20);
    CHECK(r.low_confidence);
    // untouched initialization stays within the init bound
    for (float v : r.vector) CHECK(std::abs(v) <= 0.5f / 12.0f);
  }
  SUBCASE("empty token sequence flags low confidence") {
    CHECK(infer_vector(model, TokenSequence{}, 20).low_confidence);
  }
  SUBCASE("model weights stay frozen during inference") {
    const auto words_before = model.word_vectors.data;
    const auto outputs_before = model.output_weights.data;
    const auto docs_before = model.doc_vectors.data;
    infer_vector(model, corpus.documents[1].tokens, 25);
    CHECK(model.word_vectors.data == words_before);
    CHECK(model.output_weights.data == outputs_before);
    CHECK(model.doc_vectors.data == docs_before);
  }
}

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0));
  CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine_similarity({1, 2, 3}, {-1, -2, -3}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity({1, 1}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("cosine stays within the Cauchy-Schwarz bound") {
  pvmath::SplitMix64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(64);
    DocVector a(n), b(n);
    for (float& v : a) v = rng.uniform_float(-3.0f, 3.0f);
    for (float& v : b) v = rng.uniform_float(-3.0f, 3.0f);
    a[rng.below(n)] = 1.0f;  // keep away from the zero vector
    b[rng.below(n)] = 1.0f;
    const float sim = cosine_similarity(a, b);
    CHECK(sim <= 1.0f);
    CHECK(sim >= -1.0f);
    CHECK(sim == cosine_similarity(b, a));
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  double worst = 0.0;
  std::size_t coords = 0;
  for (std::uint64_t trial = 0; trial < 120; ++trial) {
    const auto result = testsupport::gradcheck_triple(
        1000 + trial, 4 + trial % 16, 1 + trial % 6);
    worst = std::max(worst, result.max_rel_error);
    coords += result.coords_checked;
  }
  CAPTURE(worst);
  CHECK(coords > 100);
  CHECK(worst <= 1e-4);
}

TEST_CASE("model save/load round-trips bit-exactly") {
  testsupport::TempDir dir("model");
  const auto corpus = testsupport::synthetic_corpus(8, 20, 7);
  const PvModel model = train_model(corpus, small_config(8, 2));
  const auto path = dir.path() / "m.bin";
  save_model(model, path);
  const PvModel loaded = load_model(path);
  CHECK(models_equal(model, loaded));
  CHECK(loaded.language == model.language);
  CHECK(loaded.config.seed == model.config.seed);
  CHECK(loaded.config.vector_size == model.config.vector_size);
  CHECK(loaded.sampling_cdf == model.sampling_cdf);

  // loaded model behaves identically
  const TokenSequence tokens = corpus.documents[0].tokens;
  CHECK(infer_vector(model, tokens, 10).vector ==
        infer_vector(loaded, tokens, 10).vector);
}

TEST_CASE("model load failure paths") {
  testsupport::TempDir dir("model-bad");

  CHECK_THROWS_AS(load_model(dir.path() / "missing.bin"), std::runtime_error);

  const auto corpus = testsupport::synthetic_corpus(4, 15, 8);
  const PvModel model = train_model(corpus, small_config(8, 1));
  const auto path = dir.path() / "m.bin";
  save_model(model, path);

  SUBCASE("corrupted magic") {
    auto bytes = testsupport::read_file(path);
    bytes[0] = 'X';
    testsupport::write_file(path, bytes);
    CHECK_THROWS_AS(load_model(path), std::runtime_error);
  }
  SUBCASE("version mismatch") {
    auto bytes = testsupport::read_file(path);
    bytes[4] = 99;  // version field follows the 4-byte magic
    testsupport::write_file(path, bytes);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("version"),
                         std::runtime_error);
  }
  SUBCASE("truncated") {
    auto bytes = testsupport::read_file(path);
    bytes.resize(bytes.size() / 2);
    testsupport::write_file(path, bytes);
    CHECK_THROWS_AS(load_model(path), std::runtime_error);
  }
  SUBCASE("trailing garbage") {
    auto bytes = testsupport::read_file(path);
    bytes += "extra";
    testsupport::write_file(path, bytes);
    CHECK_THROWS_AS(load_model(path), std::runtime_error);
  }
}

TEST_CASE("parallel training produces a usable model") {
  const auto corpus = testsupport::synthetic_corpus(24, 25, 9);
  TrainStats stats;
  const PvModel model = train_model(corpus, small_config(12, 6), &stats, 2);
  CHECK(model.doc_vectors.rows == 24);
  REQUIRE(!stats.epoch_loss.empty());
  CHECK(stats.epoch_loss.back() < stats.epoch_loss.front());
  for (float v : model.doc_vectors.data) CHECK(std::isfinite(v));
}
