#include "coderev/language.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace coderev {

std::string_view language_name(Language lang) {
  switch (lang) {
    case Language::C: return "C";
    case Language::CSharp: return "C#";
    case Language::Java: return "Java";
    case Language::JavaScript: return "JavaScript";
    case Language::Python: return "Python";
  }
  return "?";
}

static std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<Language> parse_language(std::string_view text) {
  const std::string t = lowered(text);
  if (t == "c") return Language::C;
  if (t == "c#" || t == "cs" || t == "csharp") return Language::CSharp;
  if (t == "java") return Language::Java;
  if (t == "javascript" || t == "js") return Language::JavaScript;
  if (t == "python" || t == "py") return Language::Python;
  return std::nullopt;
}

std::optional<Language> language_from_tag(std::string_view tag) {
  const std::string t = lowered(tag);
  if (t == "c") return Language::C;
  if (t == "c#") return Language::CSharp;
  if (t == "java") return Language::Java;
  if (t == "javascript") return Language::JavaScript;
  if (t == "python") return Language::Python;
  return std::nullopt;
}

std::vector<std::string_view> source_extensions(Language lang) {
  switch (lang) {
    case Language::C: return {".c", ".h"};
    case Language::CSharp: return {".cs"};
    case Language::Java: return {".java"};
    case Language::JavaScript: return {".js"};
    case Language::Python: return {".py"};
  }
  return {};
}

}  // namespace coderev
