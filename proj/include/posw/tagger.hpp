#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posw/error.hpp"
#include "posw/text.hpp"
#include "posw/util.hpp"

namespace posw {

// A coarse part-of-speech category, an index into a TagSet.
struct CoarseTag {
  std::uint8_t id = 0;
  friend bool operator==(CoarseTag, CoarseTag) = default;
  friend auto operator<=>(CoarseTag, CoarseTag) = default;
};

inline constexpr std::string_view kOtherTag = "OTHER";

// The closed inventory of coarse categories active for a run. OTHER is always
// a member and absorbs anything unmapped.
class TagSet {
 public:
  TagSet() : TagSet(default_names()) {}

  explicit TagSet(std::vector<std::string> names) : names_(std::move(names)) {
    bool has_other = false;
    for (const auto& n : names_) has_other |= (n == kOtherTag);
    if (!has_other) names_.emplace_back(kOtherTag);
    if (names_.size() > 255) throw ConfigError("too many coarse tags (max 255)");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw ConfigError("empty coarse tag name");
      if (!ids_.emplace(names_[i], static_cast<std::uint8_t>(i)).second)
        throw ConfigError("duplicate coarse tag '" + names_[i] + "'");
    }
  }

  static std::vector<std::string> default_names() {
    return {"NOUN", "VERB",  "ADJ",   "ADV",   "PRON",     "DET",   "PREP",
            "CONJ", "NUM",   "INTERJ", "MODAL", "PARTICLE", "PUNCT", "OTHER"};
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(CoarseTag t) const { return names_.at(t.id); }

  std::optional<CoarseTag> find(std::string_view label) const {
    const auto it = ids_.find(std::string(label));
    if (it == ids_.end()) return std::nullopt;
    return CoarseTag{it->second};
  }

  CoarseTag get(std::string_view label) const {
    if (auto t = find(label)) return *t;
    throw ConfigError("unknown coarse tag '" + std::string(label) + "'");
  }

  CoarseTag other() const { return *find(kOtherTag); }

  friend bool operator==(const TagSet& a, const TagSet& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint8_t> ids_;
};

// Fine-grained (Penn Treebank / TreeTagger) tag -> coarse category.
class CollapseMap {
 public:
  CollapseMap() : CollapseMap(default_penn()) {}

  CollapseMap(TagSet tags, std::unordered_map<std::string, CoarseTag> entries)
      : tags_(std::move(tags)), entries_(std::move(entries)) {}

  // Shipped default: Penn Treebank plus the TreeTagger variants.
  static CollapseMap default_penn() {
    TagSet tags;
    static const std::pair<const char*, const char*> kEntries[] = {
        {"NN", "NOUN"},     {"NNS", "NOUN"},    {"NNP", "NOUN"},
        {"NNPS", "NOUN"},   {"NP", "NOUN"},     {"NPS", "NOUN"},
        {"VB", "VERB"},     {"VBD", "VERB"},    {"VBG", "VERB"},
        {"VBN", "VERB"},    {"VBP", "VERB"},    {"VBZ", "VERB"},
        {"VV", "VERB"},     {"VVD", "VERB"},    {"VVG", "VERB"},
        {"VVN", "VERB"},    {"VVP", "VERB"},    {"VVZ", "VERB"},
        {"VH", "VERB"},     {"VHD", "VERB"},    {"VHG", "VERB"},
        {"VHN", "VERB"},    {"VHP", "VERB"},    {"VHZ", "VERB"},
        {"JJ", "ADJ"},      {"JJR", "ADJ"},     {"JJS", "ADJ"},
        {"RB", "ADV"},      {"RBR", "ADV"},     {"RBS", "ADV"},
        {"WRB", "ADV"},     {"PRP", "PRON"},    {"PRP$", "PRON"},
        {"PP", "PRON"},     {"PP$", "PRON"},    {"WP", "PRON"},
        {"WP$", "PRON"},    {"EX", "PRON"},     {"DT", "DET"},
        {"PDT", "DET"},     {"WDT", "DET"},     {"IN", "PREP"},
        {"IN/that", "PREP"}, {"CC", "CONJ"},    {"CD", "NUM"},
        {"UH", "INTERJ"},   {"MD", "MODAL"},    {"RP", "PARTICLE"},
        {"TO", "PARTICLE"}, {"POS", "PARTICLE"}, {".", "PUNCT"},
        {",", "PUNCT"},     {":", "PUNCT"},     {"SENT", "PUNCT"},
        {"``", "PUNCT"},    {"''", "PUNCT"},    {"(", "PUNCT"},
        {")", "PUNCT"},     {"-LRB-", "PUNCT"}, {"-RRB-", "PUNCT"},
        {"#", "PUNCT"},     {"$", "PUNCT"},     {"SYM", "OTHER"},
        {"FW", "OTHER"},    {"LS", "OTHER"}};
    std::unordered_map<std::string, CoarseTag> entries;
    for (const auto& [fine, coarse] : kEntries) entries.emplace(fine, tags.get(coarse));
    return CollapseMap(std::move(tags), std::move(entries));
  }

  // Lines `fine_tag<TAB>coarse_tag`. Blank lines and lines starting with '#'
  // that hold no TAB are comments ('#' itself is a Penn tag).
  // The coarse inventory is the set of coarse labels in order of first
  // appearance, with OTHER appended when absent.
  static CollapseMap parse(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::string> order;
    std::map<std::string, bool> seen;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
      line = detail::trim(line);
      if (line.empty() || (line.front() == '#' && line.find('\t') == std::string_view::npos))
        return;
      const auto fields = detail::split_char(line, '\t');
      if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
        throw ParseError("collapse map line " + std::to_string(no) +
                             ": expected fine_tag<TAB>coarse_tag",
                         no);
      std::string coarse(detail::trim(fields[1]));
      if (!seen[coarse]) {
        seen[coarse] = true;
        order.push_back(coarse);
      }
      rows.emplace_back(std::string(detail::trim(fields[0])), coarse);
    });
    TagSet tags(order);
    std::unordered_map<std::string, CoarseTag> entries;
    for (auto& [fine, coarse] : rows) {
      if (!entries.emplace(fine, tags.get(coarse)).second)
        throw ConfigError("collapse map lists '" + fine + "' twice");
    }
    return CollapseMap(std::move(tags), std::move(entries));
  }

  static CollapseMap load(const std::string& path) {
    return parse(detail::read_file(path));
  }

  const TagSet& tags() const { return tags_; }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, CoarseTag>& entries() const {
    return entries_;
  }

  // Mapped tag, or the tag itself when it already names a coarse category.
  std::optional<CoarseTag> try_collapse(std::string_view fine) const {
    const auto it = entries_.find(std::string(fine));
    if (it != entries_.end()) return it->second;
    return tags_.find(fine);
  }

  CoarseTag collapse(std::string_view fine) const {
    return try_collapse(fine).value_or(tags_.other());
  }

 private:
  TagSet tags_;
  std::unordered_map<std::string, CoarseTag> entries_;
};

inline CoarseTag collapse(std::string_view fine_tag, const CollapseMap& map) {
  return map.collapse(fine_tag);
}

// surface -> most frequent coarse tag, for the fallback tagger.
class Lexicon {
 public:
  void add(std::string_view surface, CoarseTag tag, std::uint64_t count = 1) {
    auto& counts = counts_[normalize(surface)];
    for (auto& [t, c] : counts) {
      if (t == tag) {
        c += count;
        return;
      }
    }
    counts.emplace_back(tag, count);
  }

  // Ties go to the tag seen first.
  std::optional<CoarseTag> lookup(std::string_view surface) const {
    const auto it = counts_.find(normalize(surface));
    if (it == counts_.end() || it->second.empty()) return std::nullopt;
    auto best = it->second.front();
    for (const auto& entry : it->second)
      if (entry.second > best.second) best = entry;
    return best.first;
  }

  bool empty() const { return counts_.empty(); }

  // Lines `surface<TAB>tag`; tags are collapsed through `map`.
  static Lexicon parse(std::string_view text, const CollapseMap& map) {
    Lexicon lex;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
      if (detail::trim(line).empty()) return;
      const auto fields = detail::split_char(line, '\t');
      if (fields.size() != 2)
        throw ParseError("lexicon line " + std::to_string(no) +
                             ": expected surface<TAB>tag",
                         no);
      lex.add(fields[0], map.collapse(detail::trim(fields[1])));
    });
    return lex;
  }

  static Lexicon load(const std::string& path, const CollapseMap& map) {
    return parse(detail::read_file(path), map);
  }

 private:
  std::unordered_map<std::string, std::vector<std::pair<CoarseTag, std::uint64_t>>>
      counts_;
};

// Lexicon lookup, then suffix rules, then NOUN. Suffix rules need the token
// to be longer than the suffix.
inline std::vector<CoarseTag> tag_fallback(std::span<const std::string> tokens,
                                           const Lexicon& lexicon,
                                           const TagSet& tags) {
  const auto pick = [&](std::string_view label) {
    return tags.find(label).value_or(tags.other());
  };
  const auto has = [](std::string_view w, std::string_view suffix) {
    return w.size() > suffix.size() && detail::ends_with(w, suffix);
  };
  std::vector<CoarseTag> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (auto hit = lexicon.lookup(token)) {
      out.push_back(*hit);
      continue;
    }
    const std::string w = normalize(token);
    if (has(w, "ly"))
      out.push_back(pick("ADV"));
    else if (has(w, "ing") || has(w, "ed"))
      out.push_back(pick("VERB"));
    else if (has(w, "ous") || has(w, "ful") || has(w, "ive"))
      out.push_back(pick("ADJ"));
    else
      out.push_back(pick("NOUN"));
  }
  return out;
}

}  // namespace posw
