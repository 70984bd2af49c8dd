#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coderev/language.hpp"

namespace coderev {

// Ordered token stream produced by the shared preprocessing pipeline. The
// same pipeline runs at training time, at inference time, and before
// fingerprinting, so representations stay comparable.
struct TokenSequence {
  std::vector<std::string> tokens;

  bool operator==(const TokenSequence&) const = default;
};

// Strips comments (// and /* */ for the C family, # for Python; string
// literals are left intact) and collapses whitespace runs to single spaces.
std::string normalize_code(std::string_view code, Language lang);

// Splits into identifiers, numeric literals, and single punctuation
// characters. String literal contents are replaced by the sentinel token
// "STR". Whitespace never produces a token.
TokenSequence tokenize_code(std::string_view code);

inline TokenSequence preprocess(std::string_view code, Language lang) {
  return tokenize_code(normalize_code(code, lang));
}

// Token used in place of string literal contents.
inline constexpr std::string_view kStringSentinel = "STR";

}  // namespace coderev
