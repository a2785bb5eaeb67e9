#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace erdl {

inline bool isAsciiLetter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool isAsciiUpper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool isAsciiLower(char c) { return c >= 'a' && c <= 'z'; }

inline char toAsciiLower(char c) { return isAsciiUpper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
inline char toAsciiUpper(char c) { return isAsciiLower(c) ? static_cast<char>(c - 'a' + 'A') : c; }

inline std::string asciiLower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(toAsciiLower(c));
  return out;
}

/// True if the name contains a character that is neither a letter nor a
/// space. Spaces are a separate offense with their own rule.
inline bool hasForbiddenSymbol(std::string_view name) {
  for (char c : name)
    if (!isAsciiLetter(c) && c != ' ') return true;
  return false;
}

inline bool hasEmbeddedSpace(std::string_view name) {
  return name.find(' ') != std::string_view::npos;
}

/// CamelCase as the notation defines it: one or more words, each a capital
/// letter followed by lowercase letters. Single-capital words are allowed;
/// anything else could never survive the fixer's normalizer.
inline bool isCamelCase(std::string_view name) {
  if (name.empty()) return false;
  std::size_t i = 0;
  while (i < name.size()) {
    if (!isAsciiUpper(name[i])) return false;
    ++i;
    while (i < name.size() && isAsciiLower(name[i])) ++i;
  }
  return true;
}

/// Splits a name into words. Non-letter characters are boundaries and are
/// dropped; within letter runs, a lower-to-upper transition starts a new
/// word, and an uppercase run followed by a lowercase letter keeps only its
/// last capital for the next word ("HTTPServer" -> HTTP, Server).
inline std::vector<std::string> splitWords(std::string_view name) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      words.push_back(current);
      current.clear();
    }
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (!isAsciiLetter(c)) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const char prev = current.back();
      const bool lowerToUpper = isAsciiLower(prev) && isAsciiUpper(c);
      const bool upperRunEnds = isAsciiUpper(prev) && isAsciiUpper(c) && i + 1 < name.size() &&
                                isAsciiLower(name[i + 1]);
      if (lowerToUpper || upperRunEnds) flush();
    }
    current.push_back(c);
  }
  flush();
  return words;
}

/// The 4-step rename pipeline minus the key-prefix step: split on forbidden
/// symbols and case boundaries, re-case every word to Capital+lowercase,
/// concatenate. Returns "" when the name has no letters to keep.
inline std::string normalizeName(std::string_view name) {
  std::string out;
  for (const auto& word : splitWords(name)) {
    out.push_back(toAsciiUpper(word[0]));
    for (std::size_t i = 1; i < word.size(); ++i) out.push_back(toAsciiLower(word[i]));
  }
  return out;
}

/// Final word of the (possibly lax) name, used by the singular-form check.
inline std::string finalWord(std::string_view name) {
  auto words = splitWords(name);
  return words.empty() ? std::string() : words.back();
}

} // namespace erdl
