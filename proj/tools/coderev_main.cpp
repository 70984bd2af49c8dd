// Command-line surface for the review pipeline: ingest a posts dump, train a
// model, index fragment vectors, pre-score defectiveness, review files, and
// benchmark the two retrieval architectures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coderev/bench.hpp"
#include "coderev/defect.hpp"
#include "coderev/ingest.hpp"
#include "coderev/metrics.hpp"
#include "coderev/pv.hpp"
#include "coderev/review.hpp"
#include "coderev/sentiment.hpp"
#include "coderev/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Paths left empty on the command line resolve under $CODEREV_DATA_ROOT.
std::string default_under_root(const std::string& value, const char* subpath) {
  if (!value.empty()) return value;
  if (const char* root = std::getenv("CODEREV_DATA_ROOT"))
    return (fs::path(root) / subpath).string();
  throw CLI::ValidationError(
      std::string("path required (or set CODEREV_DATA_ROOT): ") + subpath);
}

coderev::Language require_language(const std::string& text) {
  const auto lang = coderev::parse_language(text);
  if (!lang)
    throw CLI::ValidationError("unsupported language: " + text +
                               " (expected C, C#, Java, JavaScript, or Python)");
  return *lang;
}

struct PostMeta {
  coderev::PostType type;
  int score;
  std::string title;
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& dump_path, const std::string& out_dir_arg) {
  const fs::path out_dir = default_under_root(out_dir_arg, "data");
  std::ifstream dump(dump_path, std::ios::binary);
  if (!dump) throw std::runtime_error("cannot open posts dump: " + dump_path);
  fs::create_directories(out_dir);

  coderev::IngestReport report;
  std::vector<coderev::SoPost> posts = coderev::parse_posts_dump(dump, &report);
  coderev::resolve_answer_tags(posts);

  std::ofstream posts_out(out_dir / "posts.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream frags_out(out_dir / "fragments.jsonl", std::ios::binary | std::ios::trunc);
  if (!posts_out || !frags_out)
    throw std::runtime_error("cannot write ingest outputs in " + out_dir.string());

  std::uint64_t extracted = 0, accepted = 0;
  for (const coderev::SoPost& post : posts) {
    posts_out << json{{"postId", post.post_id},
                      {"score", post.score},
                      {"tags", post.tags},
                      {"title", post.title},
                      {"type", coderev::post_type_name(post.type)}}
                     .dump()
              << '\n';
    for (const coderev::CodeFragment& frag : coderev::extract_fragments(post)) {
      ++extracted;
      if (!coderev::accept_fragment(frag)) continue;
      ++accepted;
      frags_out << coderev::fragment_to_jsonl(frag) << '\n';
    }
  }

  const json summary{{"rows", report.rows},
                     {"posts", report.posts},
                     {"malformedRows", report.malformed_rows},
                     {"skippedRowTypes", report.skipped_row_types},
                     {"fragmentsExtracted", extracted},
                     {"fragmentsAccepted", accepted}};
  write_text_file(out_dir / "ingest-report.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int cmd_train(const std::string& corpus_dir, const std::string& lang_text,
              const std::string& model_path_arg,
              const coderev::TrainingConfig& config, unsigned threads) {
  const coderev::Language lang = require_language(lang_text);
  const fs::path model_path = default_under_root(model_path_arg, "model/model.bin");

  const coderev::CorpusManifest corpus =
      coderev::load_training_corpus(corpus_dir, lang);
  std::cerr << "corpus: " << corpus.source_description << "\n";

  coderev::TrainStats stats;
  const coderev::PvModel model =
      coderev::train_model(corpus, config, &stats, threads);
  if (!stats.epoch_loss.empty()) {
    std::cerr << "loss: first epoch " << stats.epoch_loss.front()
              << ", final epoch " << stats.epoch_loss.back() << "\n";
  }
  fs::create_directories(model_path.parent_path().empty()
                             ? fs::path(".")
                             : model_path.parent_path());
  coderev::save_model(model, model_path);
  std::cout << "model written: " << model_path.string() << " (vocab "
            << model.vocab.size() << ", docs " << model.doc_vectors.rows
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// index
// ---------------------------------------------------------------------------

int cmd_index(const std::string& fragments_path, const std::string& model_path,
              const std::string& store_dir_arg, std::uint32_t infer_epochs) {
  const fs::path store_dir = default_under_root(store_dir_arg, "store");
  const coderev::PvModel model = coderev::load_model(model_path);

  std::ifstream in(fragments_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fragments file: " + fragments_path);

  coderev::VectorStore store(model.config.vector_size);
  std::string line;
  std::uint64_t total = 0, indexed = 0, low_confidence = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++total;
    const coderev::CodeFragment frag = coderev::fragment_from_jsonl(line);
    if (!frag.language || *frag.language != model.language) continue;
    const coderev::InferResult result = coderev::infer_vector(
        model, coderev::preprocess(frag.code, *frag.language), infer_epochs);
    if (result.low_confidence) ++low_confidence;
    store.insert(frag.key(), *frag.language, result.vector);
    ++indexed;
  }
  if (indexed == 0)
    throw std::runtime_error("no fragments matched the model language " +
                             std::string(coderev::language_name(model.language)));
  store.freeze();
  store.save(store_dir);
  const auto& ref = store.reference(model.language);
  std::cout << "store written: " << store_dir.string() << " (" << indexed << "/"
            << total << " fragments, reference post " << ref.source_key.post_id
            << " frag " << ref.source_key.frag_id << ", low-confidence "
            << low_confidence << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

int cmd_score(const std::string& store_dir_arg, const std::string& data_dir,
              double mu_q, double mu_a, const std::string& lexicon_path,
              bool stats) {
  const fs::path store_dir = default_under_root(store_dir_arg, "store");
  coderev::VectorStore store = coderev::VectorStore::load(store_dir);

  const fs::path posts_path = fs::path(data_dir) / "posts.jsonl";
  const fs::path frags_path = fs::path(data_dir) / "fragments.jsonl";
  std::ifstream posts_in(posts_path, std::ios::binary);
  if (!posts_in) throw std::runtime_error("cannot open " + posts_path.string());
  std::ifstream frags_in(frags_path, std::ios::binary);
  if (!frags_in) throw std::runtime_error("cannot open " + frags_path.string());

  std::unordered_map<std::int64_t, PostMeta> post_meta;
  std::vector<coderev::SoPost> posts_for_stats;
  std::string line;
  while (std::getline(posts_in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    PostMeta meta;
    meta.type = j.at("type").get<std::string>() == "Question"
                    ? coderev::PostType::Question
                    : coderev::PostType::Answer;
    meta.score = j.at("score").get<int>();
    meta.title = j.value("title", std::string());
    post_meta.emplace(j.at("postId").get<std::int64_t>(), meta);
    if (stats) {
      coderev::SoPost post;
      post.post_id = j.at("postId").get<std::int64_t>();
      post.type = meta.type;
      post.score = meta.score;
      post.tags = j.value("tags", std::vector<std::string>{});
      posts_for_stats.push_back(std::move(post));
    }
  }

  std::map<coderev::FragKey, std::string> narratives;
  while (std::getline(frags_in, line)) {
    if (line.empty()) continue;
    const coderev::CodeFragment frag = coderev::fragment_from_jsonl(line);
    narratives[frag.key()] = frag.preceding_text;
  }

  const coderev::SentimentLexicon lexicon =
      lexicon_path.empty() ? coderev::default_lexicon()
                           : coderev::load_lexicon(lexicon_path);
  const coderev::DefectThresholds thresholds{mu_q, mu_a};

  std::uint64_t scored = 0;
  for (coderev::Language lang : store.languages()) {
    for (const coderev::IndexedVector& entry : store.entries(lang)) {
      const auto meta_it = post_meta.find(entry.key.post_id);
      if (meta_it == post_meta.end())
        throw std::runtime_error("post " + std::to_string(entry.key.post_id) +
                                 " missing from " + posts_path.string());
      const auto narrative_it = narratives.find(entry.key);
      const std::string& narrative = narrative_it == narratives.end()
                                         ? std::string()
                                         : narrative_it->second;
      const coderev::SentimentLabel label = coderev::decide_sentiment(
          coderev::analyze_sentiment(narrative, lexicon));
      const int delta =
          coderev::estimate_post(meta_it->second.type,
                                 static_cast<double>(meta_it->second.score),
                                 label, thresholds);
      store.set_score(entry.key,
                      coderev::ScoreRecord{delta, meta_it->second.title});
      ++scored;
    }
  }

  // Rewrite just the scores file; vectors and index are untouched.
  std::ofstream sc(store_dir / "scores.jsonl", std::ios::binary | std::ios::trunc);
  if (!sc) throw std::runtime_error("cannot write scores.jsonl in " + store_dir.string());
  for (coderev::Language lang : store.languages()) {
    for (const coderev::IndexedVector& entry : store.entries(lang)) {
      const coderev::ScoreRecord* record = store.score_for(entry.key);
      sc << json{{"delta", record->delta},
                 {"fragId", entry.key.frag_id},
                 {"postId", entry.key.post_id},
                 {"title", record->title}}
                .dump()
         << '\n';
    }
  }
  std::cout << "scored " << scored << " fragments (mu_q=" << mu_q
            << ", mu_a=" << mu_a << ")\n";

  if (stats) {
    json stat_doc = json::object();
    for (const auto& [key, s] : coderev::threshold_stats(posts_for_stats)) {
      const std::string name =
          std::string(coderev::language_name(key.first)) + "/" +
          std::string(coderev::post_type_name(key.second));
      stat_doc[name] = {{"count", s.count}, {"min", s.min},     {"max", s.max},
                        {"avg", s.avg},     {"stddev", s.stddev}};
    }
    write_text_file(store_dir / "thresholds-report.json", stat_doc.dump(2) + "\n");
    std::cout << stat_doc.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// review
// ---------------------------------------------------------------------------

int cmd_review(const std::string& file, const std::string& lang_text,
               const std::string& model_path, const std::string& store_dir_arg,
               const coderev::ReviewOptions& options, double alpha_override,
               const std::string& format, const std::string& out_path) {
  const coderev::Language lang = require_language(lang_text);
  const fs::path store_dir = default_under_root(store_dir_arg, "store");
  const coderev::PvModel model = coderev::load_model(model_path);
  const coderev::VectorStore store = coderev::VectorStore::load(store_dir);

  coderev::ReviewOptions opts = options;
  if (alpha_override > 0.0) opts.threshold_overrides[lang] = alpha_override;

  const coderev::ReviewReport report =
      coderev::review_file(file, lang, model, store, opts);
  const std::string rendered = format == "table"
                                   ? coderev::report_to_table(report)
                                   : coderev::report_to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    write_text_file(out_path, rendered);
    std::cout << "report written: " << out_path << " (verdict "
              << coderev::defect_label_name(report.verdict_label) << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int cmd_bench(const std::string& store_dir_arg, const std::string& data_dir,
              const std::string& lang_text, const coderev::BenchParams& params,
              std::size_t query_count, const std::string& work_dir_arg,
              const std::string& out_path_arg) {
  const coderev::Language lang = require_language(lang_text);
  const fs::path store_dir = default_under_root(store_dir_arg, "store");
  const fs::path work_dir = work_dir_arg.empty()
                                ? store_dir / "bench-work"
                                : fs::path(work_dir_arg);
  const std::string out_path =
      out_path_arg.empty()
          ? default_under_root("", "reports/bench.json")
          : out_path_arg;

  const coderev::VectorStore store = coderev::VectorStore::load(store_dir);

  const fs::path frags_path = fs::path(data_dir) / "fragments.jsonl";
  std::ifstream frags_in(frags_path, std::ios::binary);
  if (!frags_in) throw std::runtime_error("cannot open " + frags_path.string());
  std::map<coderev::FragKey, std::string> codes;
  std::string line;
  while (std::getline(frags_in, line)) {
    if (line.empty()) continue;
    const coderev::CodeFragment frag = coderev::fragment_from_jsonl(line);
    if (frag.language && *frag.language == lang) codes[frag.key()] = frag.code;
  }

  std::vector<coderev::BenchFragment> fragments;
  std::vector<coderev::BenchQuery> queries;
  for (const coderev::IndexedVector& entry : store.entries(lang)) {
    const auto it = codes.find(entry.key);
    if (it == codes.end())
      throw std::runtime_error("fragment (" + std::to_string(entry.key.post_id) +
                               ", " + std::to_string(entry.key.frag_id) +
                               ") missing from " + frags_path.string());
    fragments.push_back(coderev::BenchFragment{entry.key, it->second});
    if (queries.size() < query_count)
      queries.push_back(coderev::BenchQuery{it->second, entry.vector});
  }

  const coderev::BenchReport report =
      coderev::bench_compare(store, lang, fragments, queries, work_dir, params);
  const json doc = coderev::bench_report_to_json(report);
  fs::create_directories(fs::path(out_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(out_path).parent_path());
  write_text_file(out_path, doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

coderev::DefectLabel label_from_text(const std::string& text) {
  if (text == "LikelyDefective" || text == "-1") return coderev::DefectLabel::LikelyDefective;
  if (text == "UnlikelyDefective" || text == "1") return coderev::DefectLabel::UnlikelyDefective;
  if (text == "Unpredictable" || text == "300") return coderev::DefectLabel::Unpredictable;
  throw std::runtime_error("unknown label: " + text);
}

int cmd_metrics(const std::string& pairs_path) {
  std::ifstream in(pairs_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pairs file: " + pairs_path);
  std::vector<coderev::LabeledPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    pairs.push_back(coderev::LabeledPair{
        label_from_text(j.at("predicted").get<std::string>()),
        label_from_text(j.at("actual").get<std::string>())});
  }
  const coderev::MetricsSummary summary = coderev::compute_metrics(pairs);
  const auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  const json doc{{"total", summary.metrics.total},
                 {"excludedUnpredictable", summary.excluded_unpredictable},
                 {"accuracy", summary.metrics.accuracy},
                 {"precision", opt(summary.metrics.precision)},
                 {"recall", opt(summary.metrics.recall)},
                 {"f1", opt(summary.metrics.f1)},
                 {"tp", summary.metrics.tp},
                 {"fp", summary.metrics.fp},
                 {"fn", summary.metrics.fn},
                 {"tn", summary.metrics.tn}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowd-knowledge code review: estimate source defectiveness "
               "from pre-scored Q&A code fragments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags win");

  // ingest
  std::string dump_path, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "parse a posts dump into interchange records");
  ingest->add_option("--dump", dump_path, "posts XML dump")->required();
  ingest->add_option("--out", ingest_out, "output directory (default $CODEREV_DATA_ROOT/data)");

  // train
  std::string corpus_dir, train_lang, model_out;
  coderev::TrainingConfig config;
  unsigned threads = 1;
  auto* train = app.add_subcommand("train", "train an embedding model on a source corpus");
  train->add_option("--corpus", corpus_dir, "directory of source files")->required();
  train->add_option("--lang", train_lang, "language")->required();
  train->add_option("--out", model_out, "model path (default $CODEREV_DATA_ROOT/model/model.bin)");
  train->add_option("--gamma", config.vector_size, "vector size");
  train->add_option("--epochs", config.epochs, "training epochs");
  train->add_option("--max-samples", config.max_samples, "training document cap");
  train->add_option("--window", config.window, "context window");
  train->add_option("--negatives", config.negatives, "negative samples per event");
  train->add_option("--lr", config.initial_lr, "initial learning rate");
  train->add_option("--min-lr", config.final_lr, "final learning rate");
  train->add_option("--min-count", config.min_token_count, "vocabulary min token count");
  train->add_option("--seed", config.seed, "training seed");
  train->add_option("--threads", threads, "worker threads (1 = deterministic)");

  // index
  std::string frag_path, index_model, index_out;
  std::uint32_t index_infer_epochs = 50;
  auto* index = app.add_subcommand("index", "embed fragments and build the vector store");
  index->add_option("--fragments", frag_path, "fragments.jsonl from ingest")->required();
  index->add_option("--model", index_model, "trained model path")->required();
  index->add_option("--out", index_out, "store directory (default $CODEREV_DATA_ROOT/store)");
  index->add_option("--infer-epochs", index_infer_epochs, "inference epochs per fragment");

  // score
  std::string score_store, score_data, lexicon_path;
  double mu_q = 1.0, mu_a = 1.9;
  bool score_stats = false;
  auto* score = app.add_subcommand("score", "pre-score stored fragments' defectiveness");
  score->add_option("--store", score_store, "store directory");
  score->add_option("--data", score_data, "ingest output directory")->required();
  score->add_option("--mu-q", mu_q, "question score threshold");
  score->add_option("--mu-a", mu_a, "answer score threshold");
  score->add_option("--lexicon", lexicon_path, "sentiment lexicon file (token<TAB>valence)");
  score->add_flag("--stats", score_stats, "report score statistics per language/post type");

  // review
  std::string review_file_path, review_lang, review_model, review_store;
  std::string review_format = "json", review_out;
  double alpha_override = 0.0;
  coderev::ReviewOptions review_options;
  auto* review = app.add_subcommand("review", "estimate a source file's defectiveness");
  review->add_option("--file", review_file_path, "source file to review")->required();
  review->add_option("--lang", review_lang, "language")->required();
  review->add_option("--model", review_model, "trained model path")->required();
  review->add_option("--store", review_store, "store directory");
  review->add_option("--k", review_options.k, "matches per function");
  review->add_flag("--conservative", review_options.conservative,
                   "any likely-defective match forces a likely-defective verdict");
  review->add_option("--infer-epochs", review_options.infer_epochs, "inference epochs");
  review->add_option("--alpha-threshold", alpha_override,
                     "similarity threshold override for the reviewed language");
  review->add_option("--format", review_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  review->add_option("--out", review_out, "write the report here instead of stdout");

  // bench
  std::string bench_store, bench_data, bench_lang, bench_work, bench_out;
  coderev::BenchParams bench_params;
  std::size_t bench_queries = 20;
  auto* bench = app.add_subcommand("bench", "compare fingerprint and vector retrieval");
  bench->add_option("--store", bench_store, "store directory");
  bench->add_option("--data", bench_data, "ingest output directory")->required();
  bench->add_option("--lang", bench_lang, "language")->required();
  bench->add_option("--k", bench_params.k, "gram size");
  bench->add_option("--w", bench_params.w, "window size");
  bench->add_option("--top-k", bench_params.top_k, "matches per query");
  bench->add_option("--runs", bench_params.runs, "timed query executions");
  bench->add_option("--queries", bench_queries, "self-query count");
  bench->add_option("--work", bench_work, "work directory for bench artifacts");
  bench->add_option("--out", bench_out, "report path (default $CODEREV_DATA_ROOT/reports/bench.json)");

  // metrics
  std::string pairs_path;
  auto* metrics = app.add_subcommand("metrics", "accuracy/precision/recall/F1 over labeled pairs");
  metrics->add_option("--pairs", pairs_path, "JSONL of {predicted, actual} labels")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(dump_path, ingest_out);
    if (train->parsed())
      return cmd_train(corpus_dir, train_lang, model_out, config, threads);
    if (index->parsed())
      return cmd_index(frag_path, index_model, index_out, index_infer_epochs);
    if (score->parsed())
      return cmd_score(score_store, score_data, mu_q, mu_a, lexicon_path, score_stats);
    if (review->parsed())
      return cmd_review(review_file_path, review_lang, review_model, review_store,
                        review_options, alpha_override, review_format, review_out);
    if (bench->parsed())
      return cmd_bench(bench_store, bench_data, bench_lang, bench_params,
                       bench_queries, bench_work, bench_out);
    if (metrics->parsed()) return cmd_metrics(pairs_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
