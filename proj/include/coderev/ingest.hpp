#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coderev/language.hpp"
#include "coderev/preproc.hpp"

namespace coderev {

enum class PostType { Question, Answer };

std::string_view post_type_name(PostType type);

// One post from a Q&A dump. Answer rows carry no tags of their own; the
// ingest driver copies the parent question's tags in before fragment
// extraction (resolve_answer_tags below).
struct SoPost {
  std::int64_t post_id = 0;
  PostType type = PostType::Question;
  int score = 0;
  std::vector<std::string> tags;
  std::string title;
  std::string body;
  std::int64_t parent_id = 0;  // answers only; 0 = unknown

  bool operator==(const SoPost&) const = default;
};

// A code block plus the narrative immediately before it. language is empty
// when none of the post's tags names a supported language; such fragments
// never pass accept_fragment.
struct CodeFragment {
  std::int64_t post_id = 0;
  std::int32_t frag_id = 0;
  std::string code;
  std::string preceding_text;
  std::optional<Language> language;

  FragKey key() const { return FragKey{post_id, frag_id}; }
  bool operator==(const CodeFragment&) const = default;
};

struct CorpusDocument {
  std::int32_t doc_id = 0;
  std::string path;
  TokenSequence tokens;
};

struct CorpusManifest {
  Language language = Language::Java;
  std::vector<CorpusDocument> documents;
  std::string source_description;
};

struct IngestReport {
  std::uint64_t rows = 0;
  std::uint64_t posts = 0;
  std::uint64_t malformed_rows = 0;
  std::uint64_t skipped_row_types = 0;
};

// Streams a row-oriented XML dump (the public posts export format: one <row>
// per line with Id / PostTypeId / Score / Tags / Title / Body / ParentId
// attributes). Emits question and answer rows in file order; other row types
// are skipped, malformed rows are counted and skipped. Throws on an
// unreadable stream.
void parse_posts_dump(std::istream& dump,
                      const std::function<void(SoPost&&)>& sink,
                      IngestReport* report = nullptr);

std::vector<SoPost> parse_posts_dump(std::istream& dump,
                                     IngestReport* report = nullptr);

// Copies each question's tags onto its answers (matched via parent_id).
// Answers whose parent is not in the batch keep their empty tag set.
void resolve_answer_tags(std::vector<SoPost>& posts);

// Splits the post body into <pre><code> blocks paired with the narrative
// text before each block. Returns an empty list when the post has no code
// block or no tag naming a supported language.
std::vector<CodeFragment> extract_fragments(const SoPost& post);

// Selection rule for fragments entering the knowledge base: more than 100
// non-whitespace characters of code and a resolved language.
bool accept_fragment(const CodeFragment& frag);

// Code points not in the Unicode whitespace classes. Invalid UTF-8 bytes
// count as one non-whitespace character each.
std::size_t non_whitespace_length(std::string_view utf8);

// Loads every file under root with the language's conventional extensions,
// in lexicographic path order, tokenized through the shared preprocessing.
// Files that read empty or tokenize to nothing are skipped. Throws when no
// documents remain.
CorpusManifest load_training_corpus(const std::filesystem::path& root,
                                    Language lang);

// Interchange record format: one JSON object per line with keys code,
// fragId, language, postId, precedingText. This is the bit-exact contract
// consumed by the indexer and by external tooling.
std::string fragment_to_jsonl(const CodeFragment& frag);
CodeFragment fragment_from_jsonl(std::string_view line);

// Helpers shared with tests: XML attribute unescaping and HTML stripping.
std::string xml_unescape(std::string_view text);
std::string strip_html(std::string_view html);

}  // namespace coderev
