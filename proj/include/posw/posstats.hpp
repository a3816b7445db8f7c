#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/tagger.hpp"
#include "posw/text.hpp"
#include "posw/util.hpp"

namespace posw {

inline constexpr std::size_t kMinNgram = 2;
inline constexpr std::size_t kMaxNgram = 8;

inline void check_ngram_length(std::size_t n) {
  if (n < kMinNgram || n > kMaxNgram)
    throw ConfigError("POS n-gram length must be in [2, 8], got " + std::to_string(n));
}

// n coarse tags packed one per byte, first tag in the low byte.
struct PosNgram {
  std::uint64_t key = 0;

  static PosNgram pack(std::span<const CoarseTag> tags) {
    PosNgram g;
    for (std::size_t i = 0; i < tags.size(); ++i)
      g.key |= static_cast<std::uint64_t>(tags[i].id) << (8 * i);
    return g;
  }

  std::vector<CoarseTag> unpack(std::size_t n) const {
    std::vector<CoarseTag> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i].id = static_cast<std::uint8_t>((key >> (8 * i)) & 0xFF);
    return out;
  }

  friend bool operator==(PosNgram, PosNgram) = default;
  friend auto operator<=>(PosNgram, PosNgram) = default;
};

struct PosNgramHash {
  std::size_t operator()(PosNgram g) const noexcept {
    return std::hash<std::uint64_t>{}(g.key * 0x9E3779B97F4A7C15ULL);
  }
};

using NgramCounts = std::unordered_map<PosNgram, std::uint64_t, PosNgramHash>;

// One sliding-window position: its POS n-gram and the distinct terms in it.
struct Window {
  PosNgram ngram;
  std::vector<std::string> terms;  // sorted, duplicate-free
};

// Every contiguous n-token window of one document. Windows never span
// documents; a term repeated inside a window is listed once.
inline std::vector<Window> extract(const TaggedDocument& doc, std::size_t n,
                                   const NormalizeOptions& norm = {}) {
  check_ngram_length(n);
  std::vector<Window> out;
  if (doc.tokens.size() < n) return out;
  std::vector<std::string> keys;
  std::vector<CoarseTag> tags;
  keys.reserve(doc.tokens.size());
  tags.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    keys.push_back(term_key(t.surface, norm));
    tags.push_back(t.tag);
  }
  out.reserve(doc.tokens.size() - n + 1);
  for (std::size_t start = 0; start + n <= doc.tokens.size(); ++start) {
    Window w{PosNgram::pack(std::span(tags).subspan(start, n)), {}};
    for (std::size_t i = start; i < start + n; ++i)
      if (!keys[i].empty()) w.terms.push_back(keys[i]);
    std::sort(w.terms.begin(), w.terms.end());
    w.terms.erase(std::unique(w.terms.begin(), w.terms.end()), w.terms.end());
    out.push_back(std::move(w));
  }
  return out;
}

// Collection-wide POS n-gram statistics.
//   ngram_count[g]     occurrences of n-gram g over all windows
//   term_map[t][g]     windows with n-gram g that contain term t
//   pf(t)              |term_map[t]|, the distinct n-grams containing t
//   tf(t)              sum of term_map[t]
//   distinct_types()   |ngram_count|, the |C| of the weight formulas
class PosNgramStats {
 public:
  using TermMap = std::unordered_map<std::string, NgramCounts>;

  PosNgramStats() : PosNgramStats(4) {}
  explicit PosNgramStats(std::size_t n, TagSet tags = TagSet())
      : n_(n), tags_(std::move(tags)) {
    check_ngram_length(n);
  }

  std::size_t n() const { return n_; }
  const TagSet& tags() const { return tags_; }
  const NgramCounts& ngram_count() const { return ngram_count_; }
  const TermMap& term_map() const { return term_map_; }
  std::uint64_t total_windows() const { return total_windows_; }
  std::size_t distinct_types() const { return ngram_count_.size(); }
  std::size_t vocabulary_size() const { return term_map_.size(); }

  std::uint64_t count(PosNgram g) const {
    const auto it = ngram_count_.find(g);
    return it == ngram_count_.end() ? 0 : it->second;
  }

  const NgramCounts* term_ngrams(const std::string& term) const {
    const auto it = term_map_.find(term);
    return it == term_map_.end() ? nullptr : &it->second;
  }

  std::uint64_t pf(const std::string& term) const {
    const auto* m = term_ngrams(term);
    return m ? m->size() : 0;
  }

  std::uint64_t tf(const std::string& term) const {
    const auto* m = term_ngrams(term);
    if (!m) return 0;
    std::uint64_t sum = 0;
    for (const auto& [g, c] : *m) sum += c;
    return sum;
  }

  void add(const Window& w) {
    ++ngram_count_[w.ngram];
    ++total_windows_;
    for (const auto& t : w.terms) ++term_map_[t][w.ngram];
  }

  void add_document(const TaggedDocument& doc, const NormalizeOptions& norm = {}) {
    for (const auto& w : extract(doc, n_, norm)) add(w);
  }

  // Count-wise addition; both sides must use the same n and tag inventory.
  void merge(const PosNgramStats& other) {
    if (other.n_ != n_ || !(other.tags_ == tags_))
      throw ConfigError("cannot merge POS statistics with different n or tag sets");
    for (const auto& [g, c] : other.ngram_count_) ngram_count_[g] += c;
    total_windows_ += other.total_windows_;
    for (const auto& [t, m] : other.term_map_) {
      auto& mine = term_map_[t];
      for (const auto& [g, c] : m) mine[g] += c;
    }
  }

  friend bool operator==(const PosNgramStats& a, const PosNgramStats& b) {
    return a.n_ == b.n_ && a.tags_ == b.tags_ && a.total_windows_ == b.total_windows_ &&
           a.ngram_count_ == b.ngram_count_ && a.term_map_ == b.term_map_;
  }

  std::string ngram_label(PosNgram g) const {
    std::string out;
    for (const auto t : g.unpack(n_)) {
      if (!out.empty()) out += ' ';
      out += tags_.name(t);
    }
    return out;
  }

  static constexpr std::string_view kMagic = "POSW-STATS";
  static constexpr int kVersion = 1;

  std::string serialize() const;
  static PosNgramStats deserialize(std::string_view text);

  void save(const std::string& path) const { detail::write_file(path, serialize()); }
  static PosNgramStats load(const std::string& path) {
    return deserialize(detail::read_file(path));
  }

 private:
  std::size_t n_;
  TagSet tags_;
  NgramCounts ngram_count_;
  TermMap term_map_;
  std::uint64_t total_windows_ = 0;
};

// Sharded accumulation over documents; the result does not depend on the
// document order or the thread count.
inline PosNgramStats accumulate(std::span<const TaggedDocument> docs, std::size_t n,
                                const TagSet& tags, const NormalizeOptions& norm = {},
                                unsigned threads = 1) {
  check_ngram_length(n);
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(threads, docs.size()));
  std::vector<PosNgramStats> partial(shards, PosNgramStats(n, tags));
  parallel_for(shards, threads, [&](std::size_t s) {
    const std::size_t begin = docs.size() * s / shards;
    const std::size_t end = docs.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) partial[s].add_document(docs[i], norm);
  });
  PosNgramStats out = std::move(partial.front());
  for (std::size_t s = 1; s < shards; ++s) out.merge(partial[s]);
  return out;
}

namespace detail {

inline std::string ngram_ids(PosNgram g, std::size_t n) {
  std::string out;
  for (const auto t : g.unpack(n)) {
    if (!out.empty()) out += '.';
    out += std::to_string(t.id);
  }
  return out;
}

inline PosNgram parse_ngram_ids(std::string_view s, std::size_t n, std::size_t num_tags,
                                std::size_t line) {
  const auto parts = split_char(s, '.');
  if (parts.size() != n) throw FormatError("stats line " + std::to_string(line) + ": bad n-gram");
  std::vector<CoarseTag> tags;
  for (const auto p : parts) {
    unsigned id = 0;
    if (!parse_number(p, id) || id >= num_tags)
      throw FormatError("stats line " + std::to_string(line) + ": bad tag id");
    tags.push_back(CoarseTag{static_cast<std::uint8_t>(id)});
  }
  return PosNgram::pack(tags);
}

template <typename Map>
std::vector<typename Map::const_iterator> sorted_entries(const Map& m) {
  std::vector<typename Map::const_iterator> out;
  out.reserve(m.size());
  for (auto it = m.begin(); it != m.end(); ++it) out.push_back(it);
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a->first < b->first; });
  return out;
}

// Reads `KEY<TAB>value` header lines from a versioned line-based file.
class LineReader {
 public:
  explicit LineReader(std::string_view text, std::string_view what)
      : text_(text), what_(what) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos)
      throw FormatError(std::string(what_) + " file is truncated (no final newline)");
    line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }

  std::string_view require(std::string_view key) {
    std::string_view line;
    if (!next(line))
      throw FormatError(std::string(what_) + " file is truncated (expected '" +
                        std::string(key) + "')");
    const auto f = split_char(line, '\t');
    if (f.size() < 2 || f[0] != key)
      throw FormatError(std::string(what_) + " line " + std::to_string(line_no_) +
                        ": expected '" + std::string(key) + "'");
    return line.substr(key.size() + 1);
  }

  template <typename T>
  T require_number(std::string_view key) {
    T v{};
    if (!parse_number(require(key), v))
      throw FormatError(std::string(what_) + " line " + std::to_string(line_no_) +
                        ": bad number for '" + std::string(key) + "'");
    return v;
  }

  void header(std::string_view magic, int version) {
    std::string_view line;
    if (!next(line)) throw FormatError(std::string(what_) + " file is empty");
    const auto f = split_char(line, '\t');
    int v = 0;
    if (f.size() != 2 || f[0] != magic || !parse_number(f[1], v))
      throw FormatError("not a " + std::string(what_) + " file (bad header)");
    if (v != version)
      throw VersionError(std::string(what_) + " format version " + std::to_string(v) +
                         " is not supported (expected " + std::to_string(version) + ")");
  }

  void footer() {
    std::string_view line;
    if (!next(line) || line != "end")
      throw FormatError(std::string(what_) + " file is truncated (missing end marker)");
    if (pos_ != text_.size())
      throw FormatError(std::string(what_) + " file has trailing data");
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::string_view what_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace detail

inline std::string PosNgramStats::serialize() const {
  std::string out;
  out += std::string(kMagic) + "\t" + std::to_string(kVersion) + "\n";
  out += "n\t" + std::to_string(n_) + "\n";
  out += "tags";
  for (const auto& name : tags_.names()) out += "\t" + name;
  out += "\n";
  out += "total_windows\t" + std::to_string(total_windows_) + "\n";
  out += "ngram_types\t" + std::to_string(ngram_count_.size()) + "\n";
  for (const auto it : detail::sorted_entries(ngram_count_))
    out += detail::ngram_ids(it->first, n_) + "\t" + std::to_string(it->second) + "\n";
  out += "terms\t" + std::to_string(term_map_.size()) + "\n";
  for (const auto it : detail::sorted_entries(term_map_)) {
    out += it->first;
    for (const auto g : detail::sorted_entries(it->second))
      out += "\t" + detail::ngram_ids(g->first, n_) + ":" + std::to_string(g->second);
    out += "\n";
  }
  out += "end\n";
  return out;
}

inline PosNgramStats PosNgramStats::deserialize(std::string_view text) {
  detail::LineReader in(text, "POS statistics");
  in.header(kMagic, kVersion);
  const auto n = in.require_number<std::size_t>("n");
  if (n < kMinNgram || n > kMaxNgram) throw FormatError("POS statistics: bad n");
  std::vector<std::string> names;
  for (const auto f : detail::split_char(in.require("tags"), '\t')) names.emplace_back(f);
  PosNgramStats stats(n, TagSet(std::move(names)));
  const std::size_t num_tags = stats.tags_.size();
  stats.total_windows_ = in.require_number<std::uint64_t>("total_windows");
  const auto types = in.require_number<std::size_t>("ngram_types");
  std::string_view line;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < types; ++i) {
    if (!in.next(line)) throw FormatError("POS statistics file is truncated");
    const auto f = detail::split_char(line, '\t');
    std::uint64_t c = 0;
    if (f.size() != 2 || !detail::parse_number(f[1], c))
      throw FormatError("POS statistics line " + std::to_string(in.line_no()) + ": bad n-gram row");
    stats.ngram_count_[detail::parse_ngram_ids(f[0], n, num_tags, in.line_no())] = c;
    sum += c;
  }
  if (sum != stats.total_windows_)
    throw FormatError("POS statistics: n-gram counts do not sum to total_windows");
  const auto terms = in.require_number<std::size_t>("terms");
  for (std::size_t i = 0; i < terms; ++i) {
    if (!in.next(line)) throw FormatError("POS statistics file is truncated");
    const auto f = detail::split_char(line, '\t');
    if (f.size() < 2 || f[0].empty())
      throw FormatError("POS statistics line " + std::to_string(in.line_no()) + ": bad term row");
    auto& m = stats.term_map_[std::string(f[0])];
    for (std::size_t k = 1; k < f.size(); ++k) {
      const std::size_t colon = f[k].rfind(':');
      std::uint64_t c = 0;
      if (colon == std::string_view::npos || !detail::parse_number(f[k].substr(colon + 1), c))
        throw FormatError("POS statistics line " + std::to_string(in.line_no()) + ": bad entry");
      m[detail::parse_ngram_ids(f[k].substr(0, colon), n, num_tags, in.line_no())] = c;
    }
  }
  in.footer();
  return stats;
}

}  // namespace posw
