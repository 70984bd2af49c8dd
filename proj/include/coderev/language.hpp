#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace coderev {

// The supported source languages. Everything downstream (tag filtering,
// tokenizer comment syntax, function extraction strategy, per-language
// similarity thresholds) dispatches on this enum.
enum class Language { C, CSharp, Java, JavaScript, Python };

inline constexpr std::array<Language, 5> kAllLanguages = {
    Language::C, Language::CSharp, Language::Java, Language::JavaScript,
    Language::Python};

std::string_view language_name(Language lang);

// Accepts canonical names plus common aliases (case-insensitive):
// "c", "c#", "cs", "csharp", "java", "javascript", "js", "python", "py".
std::optional<Language> parse_language(std::string_view text);

// Maps a post tag to a language. Only the exact language tags count;
// derived tags ("python-3.x") do not.
std::optional<Language> language_from_tag(std::string_view tag);

// Conventional file extensions used when loading a training corpus.
std::vector<std::string_view> source_extensions(Language lang);

// True for the languages that use // and /* */ comments.
inline bool is_c_family(Language lang) { return lang != Language::Python; }

// Identity of a code fragment: (postId, fragId). Ordering on the pair is the
// tie-break rule used throughout retrieval and for reference selection.
struct FragKey {
  std::int64_t post_id = 0;
  std::int32_t frag_id = 0;

  auto operator<=>(const FragKey&) const = default;
};

}  // namespace coderev
