#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "coderev/ingest.hpp"
#include "coderev/pv_math.hpp"
#include "support/fixtures.hpp"

using namespace coderev;

namespace {

const char* kSmallDump = R"(<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="7" PostTypeId="1" Score="5" Tags="&lt;java&gt;" Title="NPE in loop" Body="&lt;p&gt;It crashes&lt;/p&gt;" />
  <row Id="8" PostTypeId="2" ParentId="7" Score="3" Body="&lt;p&gt;Fix it like this&lt;/p&gt;" />
  <row Id="9" PostTypeId="4" Body="tag wiki" />
</posts>
)";

std::vector<SoPost> parse_text(const std::string& text, IngestReport* report = nullptr) {
  std::istringstream in(text);
  return parse_posts_dump(in, report);
}

}  // namespace

TEST_CASE("parses question and answer rows, skips other row types") {
  IngestReport report;
  const auto posts = parse_text(kSmallDump, &report);
  REQUIRE(posts.size() == 2);
  CHECK(posts[0].post_id == 7);
  CHECK(posts[0].type == PostType::Question);
  CHECK(posts[0].score == 5);
  CHECK(posts[0].tags == std::vector<std::string>{"java"});
  CHECK(posts[0].title == "NPE in loop");
  CHECK(posts[0].body == "<p>It crashes</p>");
  CHECK(posts[1].type == PostType::Answer);
  CHECK(posts[1].parent_id == 7);
  CHECK(report.skipped_row_types == 1);
  CHECK(report.malformed_rows == 0);
}

TEST_CASE("malformed rows are counted and skipped") {
  const std::string dump =
      "<row Id=\"1\" PostTypeId=\"1\" Score=\"0\" Body=\"a\" />\n"
      "<row Id=\"oops\" PostTypeId=\"1\" />\n"
      "<row Id=\"2\" PostTypeId=\"2\" Score=\"1\" Body=\"b\" />\n";
  IngestReport report;
  const auto posts = parse_text(dump, &report);
  CHECK(posts.size() == 2);
  CHECK(report.rows == 3);
  CHECK(report.malformed_rows == 1);
}

TEST_CASE("ingest is idempotent") {
  IngestReport r1, r2;
  const auto a = parse_text(kSmallDump, &r1);
  const auto b = parse_text(kSmallDump, &r2);
  CHECK(a == b);
  CHECK(r1.rows == r2.rows);
}

TEST_CASE("answers inherit question tags") {
  auto posts = parse_text(kSmallDump);
  resolve_answer_tags(posts);
  CHECK(posts[1].tags == std::vector<std::string>{"java"});

  // unknown parent: tags stay empty
  auto orphan = parse_text(
      "<row Id=\"5\" PostTypeId=\"2\" ParentId=\"99\" Score=\"0\" Body=\"x\" />\n");
  resolve_answer_tags(orphan);
  CHECK(orphan[0].tags.empty());
}

TEST_CASE("xml entities are unescaped") {
  CHECK(xml_unescape("&lt;b&gt;&amp;&quot;&apos;") == "<b>&\"'");
  CHECK(xml_unescape("line&#xA;break") == "line\nbreak");
  CHECK(xml_unescape("&#65;") == "A");
  CHECK(xml_unescape("plain") == "plain");
}

TEST_CASE("extract_fragments pairs each code block with its narrative") {
  SoPost post;
  post.post_id = 42;
  post.tags = {"java"};
  post.body =
      "<p>T1</p><pre><code>A</code></pre><p>T2</p><pre><code>B</code></pre>";
  const auto frags = extract_fragments(post);
  REQUIRE(frags.size() == 2);
  CHECK(frags[0].frag_id == 0);
  CHECK(frags[1].frag_id == 1);
  CHECK(frags[0].code == "A");
  CHECK(frags[1].code == "B");
  CHECK(frags[0].preceding_text == "T1");
  CHECK(frags[1].preceding_text == "T2");
  CHECK(frags[0].language == Language::Java);
}

TEST_CASE("extract_fragments edge cases") {
  SoPost post;
  post.post_id = 1;
  post.tags = {"python"};

  SUBCASE("narrative only") {
    post.body = "<p>no code here</p>";
    CHECK(extract_fragments(post).empty());
  }
  SUBCASE("no supported tag") {
    post.tags = {"haskell"};
    post.body = "<pre><code>main = print 1</code></pre>";
    CHECK(extract_fragments(post).empty());
  }
  SUBCASE("inline code spans are narrative, not fragments") {
    post.body = "<p>use <code>print</code></p><pre><code>x = 1</code></pre>";
    const auto frags = extract_fragments(post);
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].code == "x = 1");
    CHECK(frags[0].preceding_text == "use print");
  }
  SUBCASE("code entities unescaped") {
    post.body = "<pre><code>if (a &lt; b) c = &quot;x&quot;;</code></pre>";
    const auto frags = extract_fragments(post);
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].code == "if (a < b) c = \"x\";");
  }
  SUBCASE("pre with attributes") {
    post.body = "<pre class=\"lang-py\"><code>y = 2</code></pre>";
    const auto frags = extract_fragments(post);
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].code == "y = 2");
  }
}

TEST_CASE("fragment ids are a dense permutation") {
  pvmath::SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SoPost post;
    post.post_id = trial;
    post.tags = {"c"};
    const std::size_t blocks = rng.below(6);
    for (std::size_t b = 0; b < blocks; ++b) {
      post.body += "<p>text " + std::to_string(b) + "</p><pre><code>code" +
                   std::to_string(b) + "</code></pre>";
    }
    const auto frags = extract_fragments(post);
    REQUIRE(frags.size() == blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      CHECK(frags[b].frag_id == static_cast<std::int32_t>(b));
      CHECK(frags[b].code == "code" + std::to_string(b));
    }
  }
}

TEST_CASE("accept_fragment enforces the size and tag constraints") {
  CodeFragment frag;
  frag.language = Language::Java;

  frag.code = std::string(101, 'x');
  CHECK(accept_fragment(frag));

  frag.code = std::string(100, 'x');
  CHECK(!accept_fragment(frag));  // strict >

  frag.code = std::string(50, 'x') + std::string(60, ' ') + std::string(51, 'y');
  CHECK(accept_fragment(frag));  // 101 non-whitespace

  frag.code = std::string(200, 'x');
  frag.language.reset();  // e.g. only a haskell tag on the post
  CHECK(!accept_fragment(frag));
}

TEST_CASE("non-whitespace counting uses unicode whitespace classes") {
  CHECK(non_whitespace_length("a b\tc\nd") == 4);
  CHECK(non_whitespace_length("") == 0);
  // U+00A0 no-break space and U+2003 em space both count as whitespace
  CHECK(non_whitespace_length("a\xC2\xA0" "b") == 2);
  CHECK(non_whitespace_length("a\xE2\x80\x83" "b") == 2);
  // multibyte letters count once per code point
  CHECK(non_whitespace_length("\xC3\xA9\xC3\xA9") == 2);  // "éé"
}

TEST_CASE("accept_fragment is a pure predicate") {
  CodeFragment frag;
  frag.language = Language::C;
  frag.code = std::string(150, 'z');
  const bool first = accept_fragment(frag);
  for (int i = 0; i < 5; ++i) CHECK(accept_fragment(frag) == first);
}

TEST_CASE("load_training_corpus orders files and tokenizes") {
  testsupport::TempDir dir("corpus");
  for (int i = 0; i < 10; ++i) {
    testsupport::write_file(dir.path() / ("f" + std::to_string(i) + ".java"),
                            "class C" + std::to_string(i) + " { int x = " +
                                std::to_string(i) + "; }");
  }
  testsupport::write_file(dir.path() / "ignored.txt", "not java");

  const CorpusManifest manifest = load_training_corpus(dir.path(), Language::Java);
  REQUIRE(manifest.documents.size() == 10);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(manifest.documents[i].doc_id == static_cast<std::int32_t>(i));
  CHECK(manifest.documents[0].tokens.tokens.front() == "class");

  // determinism
  const CorpusManifest again = load_training_corpus(dir.path(), Language::Java);
  REQUIRE(again.documents.size() == manifest.documents.size());
  for (std::size_t i = 0; i < manifest.documents.size(); ++i) {
    CHECK(again.documents[i].path == manifest.documents[i].path);
    CHECK(again.documents[i].tokens == manifest.documents[i].tokens);
  }
}

TEST_CASE("load_training_corpus rejects an empty directory") {
  testsupport::TempDir dir("empty-corpus");
  testsupport::write_file(dir.path() / "readme.md", "nothing to see");
  CHECK_THROWS_AS(load_training_corpus(dir.path(), Language::Python),
                  std::runtime_error);
}

TEST_CASE("parser survives arbitrary garbage input") {
  pvmath::SplitMix64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    std::string garbage;
    const std::size_t len = rng.below(400);
    for (std::size_t i = 0; i < len; ++i) {
      const char pool[] = "<row Id=\"/>&;#x\n\t abcXYZ019";
      garbage.push_back(pool[rng.below(sizeof(pool) - 1)]);
    }
    std::istringstream in(garbage);
    IngestReport report;
    CHECK_NOTHROW(parse_posts_dump(in, &report));
  }
}

TEST_CASE("fragment extraction survives malformed html") {
  pvmath::SplitMix64 rng(124);
  for (int trial = 0; trial < 100; ++trial) {
    SoPost post;
    post.post_id = trial;
    post.tags = {"java"};
    const std::size_t len = rng.below(300);
    for (std::size_t i = 0; i < len; ++i) {
      const char pool[] = "<pre><code></</>text&lt;&amp; \n";
      post.body.push_back(pool[rng.below(sizeof(pool) - 1)]);
    }
    CHECK_NOTHROW(extract_fragments(post));
  }
}

TEST_CASE("interchange jsonl round-trips and pins the format") {
  CodeFragment frag;
  frag.post_id = 7;
  frag.frag_id = 0;
  frag.language = Language::Java;
  frag.code = "int x = 1;";
  frag.preceding_text = "It crashes";

  const std::string line = fragment_to_jsonl(frag);
  CHECK(line ==
        R"({"code":"int x = 1;","fragId":0,"language":"Java","postId":7,"precedingText":"It crashes"})");
  CHECK(fragment_from_jsonl(line) == frag);
}
