#include "coderev/funcextract.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace coderev {

namespace {

int line_of(std::string_view text, std::size_t pos) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

FunctionUnit whole_file_unit(std::string_view source) {
  FunctionUnit unit;
  unit.body_text = std::string(source);
  unit.start_line = 1;
  unit.end_line = std::max(1, line_of(source, source.size()));
  return unit;
}

// Copy of the source with comments, string/char literal contents, and (for C)
// preprocessor lines blanked to spaces. Same length, newlines preserved, so
// indices and line numbers carry over to the original text.
std::string shadow_source(std::string_view src, bool c_preprocessor) {
  std::string out(src);
  std::size_t i = 0;
  auto blank = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < out.size(); ++k)
      if (out[k] != '\n') out[k] = ' ';
  };
  bool at_line_start = true;
  while (i < src.size()) {
    const char c = src[i];
    if (c_preprocessor && at_line_start) {
      std::size_t j = i;
      while (j < src.size() && (src[j] == ' ' || src[j] == '\t')) ++j;
      if (j < src.size() && src[j] == '#') {
        std::size_t end = src.find('\n', j);
        if (end == std::string_view::npos) end = src.size();
        blank(i, end);
        i = end;
        at_line_start = true;
        if (i < src.size()) ++i;
        continue;
      }
    }
    at_line_start = c == '\n';
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      blank(i, end);
      i = end;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      std::size_t end = src.find("*/", i + 2);
      end = end == std::string_view::npos ? src.size() : end + 2;
      blank(i, end);
      i = end;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < src.size()) {
        if (src[j] == '\\' && j + 1 < src.size()) { j += 2; continue; }
        if (src[j] == c || src[j] == '\n') break;  // unterminated: stop at EOL
        ++j;
      }
      if (j < src.size() && src[j] == c) ++j;
      blank(i + 1, j > i + 1 ? j - 1 : i + 1);
      i = j;
      continue;
    }
    ++i;
  }
  return out;
}

const std::unordered_set<std::string_view> kControlWords = {
    "if", "for", "while", "switch", "catch", "synchronized", "return",
    "new", "do", "else", "case", "sizeof", "assert", "throw", "using",
};

enum class HeaderKind {
  Function,    // emit the brace block as a unit
  Expression,  // initializer / anonymous class: skip the block silently
  Scope,       // class, namespace, control flow: descend into it
};

// Decides what the header text (shadowed) before a '{' opens, and extracts
// the function name when it is a signature.
HeaderKind classify_header(std::string_view header, std::string* name) {
  // A top-level '=' means the brace opens an expression (field initializer,
  // array literal, anonymous class on the right-hand side).
  int depth = 0;
  for (char c : header) {
    if (c == '(' || c == '[') ++depth;
    else if (c == ')' || c == ']') --depth;
    else if (c == '=' && depth == 0) return HeaderKind::Expression;
  }

  // Last balanced (...) group.
  const std::size_t close = header.rfind(')');
  if (close == std::string_view::npos) return HeaderKind::Scope;
  depth = 0;
  std::size_t open = std::string_view::npos;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (header[i] == ')') ++depth;
    else if (header[i] == '(') {
      --depth;
      if (depth == 0) { open = i; break; }
    }
  }
  if (open == std::string_view::npos) return HeaderKind::Scope;

  // After the parameter list only identifiers, commas and whitespace may
  // remain (e.g. "throws IOException").
  for (std::size_t i = close + 1; i < header.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(header[i]);
    if (std::isalnum(c) || c == '_' || c == ',' || std::isspace(c)) continue;
    return HeaderKind::Scope;
  }

  // Identifier immediately before the '('.
  std::size_t end = open;
  while (end > 0 && std::isspace(static_cast<unsigned char>(header[end - 1]))) --end;
  std::size_t start = end;
  while (start > 0) {
    const unsigned char c = static_cast<unsigned char>(header[start - 1]);
    if (std::isalnum(c) || c == '_' || c == '$') --start;
    else break;
  }
  if (start == end) return HeaderKind::Scope;
  const std::string_view ident = header.substr(start, end - start);
  if (std::isdigit(static_cast<unsigned char>(ident[0]))) return HeaderKind::Scope;
  if (kControlWords.contains(ident)) return HeaderKind::Scope;
  *name = std::string(ident);
  return HeaderKind::Function;
}

std::vector<FunctionUnit> extract_braced(std::string_view source, Language lang,
                                         ExtractStats* stats) {
  const std::string shadow = shadow_source(source, lang == Language::C);
  std::vector<FunctionUnit> units;
  std::size_t last_boundary = 0;
  std::size_t i = 0;
  int depth = 0;
  while (i < shadow.size()) {
    const char c = shadow[i];
    if (c == ';') {
      last_boundary = i + 1;
      ++i;
      continue;
    }
    if (c == '}') {
      --depth;
      if (depth < 0) {
        if (stats) {
          stats->whole_file_fallback = true;
          stats->fallback_reason = "unbalanced braces";
        }
        return {whole_file_unit(source)};
      }
      last_boundary = i + 1;
      ++i;
      continue;
    }
    if (c != '{') {
      ++i;
      continue;
    }

    std::string name;
    const std::string_view header(shadow.data() + last_boundary, i - last_boundary);
    const HeaderKind kind = classify_header(header, &name);
    if (kind == HeaderKind::Scope) {
      ++depth;
      last_boundary = i + 1;
      ++i;
      continue;
    }

    // Find the matching close brace.
    std::size_t j = i + 1;
    int body_depth = 1;
    while (j < shadow.size() && body_depth > 0) {
      if (shadow[j] == '{') ++body_depth;
      else if (shadow[j] == '}') --body_depth;
      ++j;
    }
    if (body_depth != 0) {
      if (stats) {
        stats->whole_file_fallback = true;
        stats->fallback_reason = "unterminated function body";
      }
      return {whole_file_unit(source)};
    }
    if (kind == HeaderKind::Expression) {
      last_boundary = j;
      i = j;
      continue;
    }

    std::size_t sig_start = last_boundary;
    while (sig_start < i &&
           std::isspace(static_cast<unsigned char>(shadow[sig_start])))
      ++sig_start;
    // Shadowed comment regions read as spaces, so sig_start lands on the
    // first real signature character.
    while (sig_start < i && shadow[sig_start] == ' ') ++sig_start;

    FunctionUnit unit;
    unit.name = std::move(name);
    unit.body_text = std::string(source.substr(sig_start, j - sig_start));
    unit.start_line = line_of(source, sig_start);
    unit.end_line = line_of(source, j - 1);
    units.push_back(std::move(unit));

    last_boundary = j;
    i = j;
  }
  return units;
}

std::size_t indent_width(std::string_view line) {
  std::size_t w = 0;
  for (char c : line) {
    if (c == ' ') w += 1;
    else if (c == '\t') w += 8;
    else break;
  }
  return w;
}

bool blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<FunctionUnit> extract_python(std::string_view source) {
  struct Line {
    std::size_t begin, end;  // [begin, end) without the newline
  };
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    lines.push_back({pos, nl});
    if (nl == source.size()) break;
    pos = nl + 1;
  }

  auto line_view = [&](std::size_t idx) {
    return source.substr(lines[idx].begin, lines[idx].end - lines[idx].begin);
  };

  auto def_name = [](std::string_view line) -> std::string {
    std::size_t p = line.find_first_not_of(" \t");
    if (p == std::string_view::npos) return {};
    std::string_view rest = line.substr(p);
    if (rest.starts_with("async")) {
      rest.remove_prefix(5);
      const std::size_t q = rest.find_first_not_of(" \t");
      if (q == std::string_view::npos) return {};
      rest.remove_prefix(q);
    }
    if (!rest.starts_with("def")) return {};
    rest.remove_prefix(3);
    if (rest.empty() || (rest[0] != ' ' && rest[0] != '\t')) return {};
    const std::size_t q = rest.find_first_not_of(" \t");
    if (q == std::string_view::npos) return {};
    rest.remove_prefix(q);
    std::size_t e = 0;
    while (e < rest.size() &&
           (std::isalnum(static_cast<unsigned char>(rest[e])) || rest[e] == '_'))
      ++e;
    return std::string(rest.substr(0, e));
  };

  std::vector<FunctionUnit> units;
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string_view line = line_view(i);
    const std::string name = def_name(line);
    if (name.empty()) {
      ++i;
      continue;
    }
    const std::size_t def_indent = indent_width(line);
    std::size_t last = i;
    std::size_t j = i + 1;
    while (j < lines.size()) {
      const std::string_view lj = line_view(j);
      if (!blank_or_comment(lj)) {
        if (indent_width(lj) <= def_indent) break;
        last = j;
      }
      ++j;
    }
    FunctionUnit unit;
    unit.name = name;
    unit.body_text = std::string(
        source.substr(lines[i].begin, lines[last].end - lines[i].begin));
    unit.start_line = static_cast<int>(i + 1);
    unit.end_line = static_cast<int>(last + 1);
    units.push_back(std::move(unit));
    i = j;
  }
  return units;
}

}  // namespace

std::vector<FunctionUnit> extract_functions(std::string_view source,
                                            Language lang,
                                            ExtractStats* stats) {
  if (stats) *stats = ExtractStats{};
  if (source.empty()) return {};

  std::vector<FunctionUnit> units;
  switch (lang) {
    case Language::C:
    case Language::Java:
      units = extract_braced(source, lang, stats);
      break;
    case Language::Python:
      units = extract_python(source);
      break;
    case Language::CSharp:
    case Language::JavaScript:
      // No grammar wired up for these; the whole file is the unit.
      units = {whole_file_unit(source)};
      break;
  }
  if (units.empty()) units = {whole_file_unit(source)};
  return units;
}

}  // namespace coderev
