#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace posw {

struct NormalizeOptions {
  bool stem = false;
};

namespace detail {

inline bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

// Length of the whitespace sequence starting at s[i], 0 if none. Covers ASCII
// whitespace plus the UTF-8 encodings of the Unicode White_Space characters.
inline std::size_t whitespace_length(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c == ' ' || (c >= 0x09 && c <= 0x0D)) return 1;
  const auto at = [&](std::size_t k) -> unsigned {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0u;
  };
  if (c == 0xC2 && (at(1) == 0x85 || at(1) == 0xA0)) return 2;
  if (c == 0xE1 && at(1) == 0x9A && at(2) == 0x80) return 3;  // U+1680
  if (c == 0xE2 && at(1) == 0x80) {
    const unsigned b = at(2);
    if ((b >= 0x80 && b <= 0x8A) || b == 0xA8 || b == 0xA9 || b == 0xAF)
      return 3;
  }
  if (c == 0xE2 && at(1) == 0x81 && at(2) == 0x9F) return 3;  // U+205F
  if (c == 0xE3 && at(1) == 0x80 && at(2) == 0x80) return 3;  // U+3000
  return 0;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace detail

// Removes leading and trailing ASCII punctuation; internal characters
// (hyphens, apostrophes, periods) are kept.
inline std::string_view strip_punct(std::string_view token) {
  while (!token.empty() &&
         detail::is_ascii_punct(static_cast<unsigned char>(token.front())))
    token.remove_prefix(1);
  while (!token.empty() &&
         detail::is_ascii_punct(static_cast<unsigned char>(token.back())))
    token.remove_suffix(1);
  return token;
}

// Whitespace split followed by punctuation stripping. Tokens that are pure
// punctuation disappear.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t ws;
    while (i < text.size() && (ws = detail::whitespace_length(text, i)) > 0)
      i += ws;
    const std::size_t start = i;
    while (i < text.size() && detail::whitespace_length(text, i) == 0) ++i;
    if (i > start) {
      const std::string_view tok = strip_punct(text.substr(start, i - start));
      if (!tok.empty()) out.emplace_back(tok);
    }
  }
  return out;
}

// Harman's S-stemmer. Light, plural-only, and idempotent.
inline std::string s_stem(std::string word) {
  using detail::ends_with;
  if (ends_with(word, "ies") && !ends_with(word, "eies") &&
      !ends_with(word, "aies") && word.size() > 3) {
    word.resize(word.size() - 3);
    word += 'y';
  } else if (ends_with(word, "es") && !ends_with(word, "aes") &&
             !ends_with(word, "ees") && !ends_with(word, "oes") &&
             word.size() > 2) {
    word.pop_back();
  } else if (ends_with(word, "s") && !ends_with(word, "us") &&
             !ends_with(word, "ss") && word.size() > 1) {
    word.pop_back();
  }
  return word;
}

// ASCII lowercasing plus the optional stemmer. Bytes >= 0x80 pass through.
inline std::string normalize(std::string_view token,
                             const NormalizeOptions& opts = {}) {
  std::string out(token);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  if (opts.stem) out = s_stem(std::move(out));
  return out;
}

// The key a surface form is indexed and counted under. Empty means the
// surface carries no term (pure punctuation).
inline std::string term_key(std::string_view surface,
                            const NormalizeOptions& opts = {}) {
  return normalize(strip_punct(surface), opts);
}

// A small English stopword list, used only when index stopping is enabled.
inline bool is_stopword(std::string_view term) {
  static constexpr std::array<std::string_view, 48> kWords = {
      "a",    "about", "an",   "and",   "are",  "as",   "at",    "be",
      "been", "but",   "by",   "for",   "from", "had",  "has",   "have",
      "he",   "her",   "his",  "i",     "in",   "is",   "it",    "its",
      "of",   "on",    "or",   "she",   "so",   "that", "the",   "their",
      "them", "there", "they", "this",  "to",   "was",  "we",    "were",
      "what", "when",  "which", "who",  "will", "with", "would", "you"};
  for (const auto w : kWords)
    if (w == term) return true;
  return false;
}

}  // namespace posw
