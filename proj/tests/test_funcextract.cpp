#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "coderev/funcextract.hpp"
#include "coderev/pv_math.hpp"

using namespace coderev;

namespace {

const char* kJavaClass = R"(package demo;

// a utility class
public class Calc {
    private int base;

    public Calc(int base) {
        this.base = base;
    }

    public int add(int a, int b) {
        if (a > 0) { a += base; }
        return a + b;
    }

    /** doubles a value */
    public static int twice(int v) throws IllegalStateException {
        return v * 2;
    }
}
)";

}  // namespace

TEST_CASE("java class yields one unit per method") {
  const auto units = extract_functions(kJavaClass, Language::Java);
  REQUIRE(units.size() == 3);
  CHECK(units[0].name == "Calc");
  CHECK(units[1].name == "add");
  CHECK(units[2].name == "twice");

  // ranges are ordered and non-overlapping
  for (std::size_t i = 1; i < units.size(); ++i)
    CHECK(units[i].start_line > units[i - 1].end_line);

  // every unit is a contiguous substring of the source
  const std::string source = kJavaClass;
  for (const FunctionUnit& u : units) {
    CHECK(source.find(u.body_text) != std::string::npos);
    CHECK(u.start_line <= u.end_line);
    CHECK(!u.body_text.empty());
  }

  // inner braces stay inside their unit
  CHECK(units[1].body_text.find("if (a > 0) { a += base; }") != std::string::npos);
}

TEST_CASE("c functions with pointers and preprocessor lines") {
  const char* src = R"(#include <stdio.h>
#define LIMIT 10

static char *copy_name(const char *in) {
    return strdup(in);
}

int main(void)
{
    for (int i = 0; i < LIMIT; i++) { printf("%d\n", i); }
    return 0;
}
)";
  const auto units = extract_functions(src, Language::C);
  REQUIRE(units.size() == 2);
  CHECK(units[0].name == "copy_name");
  CHECK(units[1].name == "main");
  CHECK(units[1].body_text.starts_with("int main(void)"));
}

TEST_CASE("control statements are not functions") {
  const char* src = R"(void f() {
    while (x) { step(); }
    if (y) { other(); }
    switch (z) { default: break; }
}
)";
  const auto units = extract_functions(src, Language::C);
  REQUIRE(units.size() == 1);
  CHECK(units[0].name == "f");
}

TEST_CASE("strings and comments with braces do not confuse matching") {
  const char* src = R"(int f() {
    const char *s = "} not a brace {";
    // } also not here
    /* { */
    return 0;
}
int g() { return 1; }
)";
  const auto units = extract_functions(src, Language::C);
  REQUIRE(units.size() == 2);
  CHECK(units[0].name == "f");
  CHECK(units[1].name == "g");
}

TEST_CASE("javascript and c# pass the whole file through") {
  const char* src = "function f() { return 1; }\nfunction g() { return 2; }\n";
  for (Language lang : {Language::JavaScript, Language::CSharp}) {
    const auto units = extract_functions(src, lang);
    REQUIRE(units.size() == 1);
    CHECK(units[0].body_text == src);
    CHECK(units[0].start_line == 1);
  }
}

TEST_CASE("python def blocks by indentation") {
  const char* src = R"(import os

def outer(a):
    x = a + 1
    def inner(b):
        return b * 2
    return inner(x)

class Thing:
    def method(self):
        return 42

def last():
    pass
)";
  const auto units = extract_functions(src, Language::Python);
  REQUIRE(units.size() == 3);
  CHECK(units[0].name == "outer");
  CHECK(units[1].name == "method");
  CHECK(units[2].name == "last");
  // nested def stays inside the outer unit
  CHECK(units[0].body_text.find("def inner") != std::string::npos);
  CHECK(units[0].start_line == 3);
  CHECK(units[0].end_line == 7);
}

TEST_CASE("unbalanced braces fall back to the whole file") {
  const char* src = "int f() { int x = 1;\n";  // never closed
  ExtractStats stats;
  const auto units = extract_functions(src, Language::C, &stats);
  REQUIRE(units.size() == 1);
  CHECK(units[0].body_text == src);
  CHECK(stats.whole_file_fallback);

  const char* extra_close = "}} int g() { return 0; }\n";
  const auto units2 = extract_functions(extra_close, Language::C, &stats);
  REQUIRE(units2.size() == 1);
  CHECK(stats.whole_file_fallback);
}

TEST_CASE("no functions found returns one whole-file unit") {
  const char* src = "int x = 1;\nint y = 2;\n";
  ExtractStats stats;
  const auto units = extract_functions(src, Language::C, &stats);
  REQUIRE(units.size() == 1);
  CHECK(units[0].body_text == src);
  CHECK(!stats.whole_file_fallback);

  const auto py = extract_functions("x = 1\n", Language::Python);
  REQUIRE(py.size() == 1);
}

TEST_CASE("empty input yields no units") {
  CHECK(extract_functions("", Language::Java).empty());
  CHECK(extract_functions("", Language::Python).empty());
}

TEST_CASE("extraction is total on arbitrary input") {
  pvmath::SplitMix64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::string garbage;
    const std::size_t len = 1 + rng.below(250);
    for (std::size_t i = 0; i < len; ++i) {
      const char pool[] = "(){};=\"'/#\\\n\t abcdef_09";
      garbage.push_back(pool[rng.below(sizeof(pool) - 1)]);
    }
    for (Language lang : kAllLanguages) {
      const auto units = extract_functions(garbage, lang);
      REQUIRE(!units.empty());
      const std::string source = garbage;
      for (const FunctionUnit& u : units) {
        CHECK(!u.body_text.empty());
        CHECK(source.find(u.body_text) != std::string::npos);
        CHECK(u.start_line <= u.end_line);
      }
    }
  }
}

TEST_CASE("field initializers with braces are not methods") {
  const char* src = R"(public class C {
    private int[] table = {1, 2, 3};
    private Runnable r = new Runnable() { public void run() {} };

    public void real() { use(table); }
}
)";
  const auto units = extract_functions(src, Language::Java);
  REQUIRE(units.size() == 1);
  CHECK(units[0].name == "real");
}
