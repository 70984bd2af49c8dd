#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coderev/language.hpp"

namespace coderev {

// A function definition carved out of a source file; the unit of comparison
// at review time. Line numbers are 1-based and inclusive.
struct FunctionUnit {
  std::string name;  // may be empty for the whole-file unit
  std::string body_text;
  int start_line = 1;
  int end_line = 1;
};

struct ExtractStats {
  bool whole_file_fallback = false;
  std::string fallback_reason;
};

// C and Java: signature pattern + brace matching, one unit per top-level
// function or class-member method. Python: def blocks by indentation, outer
// defs only. C# and JavaScript: the whole file as a single unit. Any input
// that yields no function (including unbalanced braces) falls back to one
// whole-file unit; the result is never empty for non-empty input.
std::vector<FunctionUnit> extract_functions(std::string_view source,
                                            Language lang,
                                            ExtractStats* stats = nullptr);

}  // namespace coderev
