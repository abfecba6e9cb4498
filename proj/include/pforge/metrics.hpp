// Code-size counters: non-whitespace characters and identifier occurrences
// (reserved words excluded).

#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pforge {

enum class Language { PatternLang, CppLike };

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexityCount {
  std::size_t characters = 0;
  std::size_t identifiers = 0;
};

// Java keywords for PatternLang, C/C++ keywords for CppLike. Loaded from the
// lists under data/reserved, embedded at build time.
const std::set<std::string, std::less<>>& reserved_words(Language lang);

/// Non-whitespace code points.
std::size_t count_characters(std::string_view text);

/// Identifier tokens that are not reserved words. Comments, string and
/// character literals, numbers and `@Marker` annotations are skipped.
/// Throws MetricsError on input that does not lex.
std::size_t count_identifiers(std::string_view text, Language lang);

ComplexityCount measure(std::string_view text, Language lang);

// .cpp/.cc/.hpp/.h/.cxx map to CppLike, anything else to PatternLang.
Language language_for_path(std::string_view path);

}  // namespace pforge
