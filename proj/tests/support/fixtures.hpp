#pragma once

// Shared fixture builders for the unit and acceptance suites.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "coderev/ingest.hpp"
#include "coderev/pv.hpp"
#include "coderev/pv_math.hpp"

namespace testsupport {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix) {
    const auto base = std::filesystem::temp_directory_path();
    static std::atomic<unsigned> counter{0};
    path_ = base / (prefix + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Synthetic corpus: each document draws most tokens from its own pool of the
// shared vocabulary plus a few common tokens, which keeps documents
// distinguishable while the vocabulary stays shared.
inline coderev::CorpusManifest synthetic_corpus(std::size_t docs,
                                                std::size_t tokens_per_doc,
                                                std::uint64_t seed,
                                                std::size_t vocab_size = 400,
                                                std::size_t pool_size = 24) {
  coderev::pvmath::SplitMix64 rng(seed);
  coderev::CorpusManifest corpus;
  corpus.language = coderev::Language::Java;
  corpus.source_description = "synthetic";
  for (std::size_t d = 0; d < docs; ++d) {
    coderev::CorpusDocument doc;
    doc.doc_id = static_cast<std::int32_t>(d);
    doc.path = "synthetic/" + std::to_string(d);
    std::vector<std::size_t> pool(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) pool[i] = rng.below(vocab_size);
    for (std::size_t t = 0; t < tokens_per_doc; ++t) {
      const bool common = rng.below(10) == 0;
      const std::size_t id = common ? rng.below(16) : pool[rng.below(pool_size)];
      doc.tokens.tokens.push_back("tok" + std::to_string(id));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Random code-like text of the requested length (no whitespace), suitable
// for fingerprinting fixtures.
inline std::string random_code(coderev::pvmath::SplitMix64& rng,
                               std::size_t length) {
  static constexpr char kAlphabet[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_(){};=+";
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    out.push_back(kAlphabet[rng.below(sizeof(kAlphabet) - 1)]);
  return out;
}

}  // namespace testsupport
