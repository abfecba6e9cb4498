#include "pforge/metrics.hpp"

#include <cctype>
#include <sstream>

namespace pforge {

// Defined in the generated reserved_words.cpp.
extern const char* const kReservedJava;
extern const char* const kReservedCpp;

namespace {

std::set<std::string, std::less<>> load_words(std::string_view data) {
  std::set<std::string, std::less<>> out;
  std::istringstream in{std::string(data)};
  for (std::string line; std::getline(in, line);) {
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (!line.empty() && line[0] != '#') out.insert(line);
  }
  return out;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

const std::set<std::string, std::less<>>& reserved_words(Language lang) {
  static const auto java = load_words(kReservedJava);
  static const auto cpp = load_words(kReservedCpp);
  return lang == Language::PatternLang ? java : cpp;
}

std::size_t count_characters(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') continue;
    ++n;
  }
  return n;
}

std::size_t count_identifiers(std::string_view text, Language lang) {
  const auto& reserved = reserved_words(lang);
  std::size_t count = 0;
  std::size_t i = 0;
  int line = 1;
  auto fail = [&](const std::string& what) {
    throw MetricsError("line " + std::to_string(line) + ": " + what);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (text.substr(i, 2) == "/*") {
      std::size_t end = text.find("*/", i + 2);
      if (end == std::string_view::npos) fail("unterminated comment");
      for (std::size_t k = i; k < end; ++k) line += text[k] == '\n';
      i = end + 2;
    } else if (c == '"' || c == '\'') {
      std::size_t k = i + 1;
      while (k < text.size() && text[k] != c && text[k] != '\n') k += text[k] == '\\' ? 2 : 1;
      if (k >= text.size() || text[k] != c) fail("unterminated literal");
      i = k + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      // Numbers, including suffixes and hex digits such as 0x1FL.
      while (i < text.size() && (ident_char(text[i]) || text[i] == '.')) ++i;
    } else if (c == '@') {
      ++i;
      while (i < text.size() && ident_char(text[i])) ++i;
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      if (!reserved.count(text.substr(start, i - start))) ++count;
    } else if (static_cast<unsigned char>(c) >= 0x80) {
      fail("unexpected non-ASCII character outside a comment or literal");
    } else if (std::ispunct(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      fail("unexpected control character");
    }
  }
  return count;
}

ComplexityCount measure(std::string_view text, Language lang) {
  return {count_characters(text), count_identifiers(text, lang)};
}

Language language_for_path(std::string_view path) {
  for (std::string_view ext : {".cpp", ".cc", ".cxx", ".hpp", ".h", ".hh"}) {
    if (path.size() >= ext.size() && path.substr(path.size() - ext.size()) == ext) {
      return Language::CppLike;
    }
  }
  return Language::PatternLang;
}

}  // namespace pforge
