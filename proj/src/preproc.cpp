#include "coderev/preproc.hpp"

#include <cctype>

namespace coderev {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

// Copies a quoted literal verbatim, honoring backslash escapes. Returns the
// index just past the closing quote (or end of input when unterminated).
std::size_t copy_literal(std::string_view code, std::size_t i, char quote,
                         std::string* out) {
  if (out) out->push_back(code[i]);
  ++i;
  while (i < code.size()) {
    const char c = code[i];
    if (out) out->push_back(c);
    ++i;
    if (c == '\\' && i < code.size()) {
      if (out) out->push_back(code[i]);
      ++i;
      continue;
    }
    if (c == quote) break;
  }
  return i;
}

// Skips a quoted literal, returns index past the closing quote.
std::size_t skip_literal(std::string_view code, std::size_t i, char quote) {
  return copy_literal(code, i, quote, nullptr);
}

}  // namespace

std::string normalize_code(std::string_view code, Language lang) {
  const bool c_family = is_c_family(lang);
  std::string out;
  out.reserve(code.size());
  bool pending_space = false;

  auto emit = [&](char c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  };

  std::size_t i = 0;
  while (i < code.size()) {
    const char c = code[i];
    if (c_family && c == '/' && i + 1 < code.size() && code[i + 1] == '/') {
      i += 2;
      while (i < code.size() && code[i] != '\n') ++i;
      pending_space = true;
      continue;
    }
    if (c_family && c == '/' && i + 1 < code.size() && code[i + 1] == '*') {
      i += 2;
      while (i + 1 < code.size() && !(code[i] == '*' && code[i + 1] == '/')) ++i;
      i = (i + 1 < code.size()) ? i + 2 : code.size();
      pending_space = true;
      continue;
    }
    if (!c_family && c == '#') {
      ++i;
      while (i < code.size() && code[i] != '\n') ++i;
      pending_space = true;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::string lit;
      i = copy_literal(code, i, c, &lit);
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out += lit;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      ++i;
      continue;
    }
    emit(c);
    ++i;
  }
  return out;
}

TokenSequence tokenize_code(std::string_view code) {
  TokenSequence seq;
  std::size_t i = 0;
  while (i < code.size()) {
    const unsigned char c = static_cast<unsigned char>(code[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < code.size() && is_ident_char(static_cast<unsigned char>(code[j]))) ++j;
      seq.tokens.emplace_back(code.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isdigit(c)) {
      // Numeric literal: digits plus alnum/._ tail covers hex, suffixes and
      // decimal points without a per-language grammar.
      std::size_t j = i + 1;
      while (j < code.size()) {
        const unsigned char d = static_cast<unsigned char>(code[j]);
        if (std::isalnum(d) || d == '.' || d == '_') ++j;
        else break;
      }
      seq.tokens.emplace_back(code.substr(i, j - i));
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      seq.tokens.emplace_back(kStringSentinel);
      i = skip_literal(code, i, static_cast<char>(c));
      continue;
    }
    seq.tokens.emplace_back(1, static_cast<char>(c));
    ++i;
  }
  return seq;
}

}  // namespace coderev
