#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/posstats.hpp"
#include "posw/text.hpp"
#include "posw/util.hpp"

namespace posw {

using DocId = std::uint32_t;

struct Posting {
  DocId doc = 0;
  std::uint32_t tf = 0;
  friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexOptions {
  NormalizeOptions norm;
  bool remove_stopwords = false;
};

// Document-level inverted index. Postings are sorted by doc id; ids follow
// input order.
class InvertedIndex {
 public:
  using PostingsMap = std::unordered_map<std::string, std::vector<Posting>>;

  std::size_t num_docs() const { return docnos_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  double avg_doc_len() const {
    return docnos_.empty() ? 0.0
                           : static_cast<double>(total_tokens_) / static_cast<double>(docnos_.size());
  }
  std::size_t vocabulary_size() const { return postings_.size(); }

  const std::string& docno(DocId id) const { return docnos_.at(id); }
  std::uint32_t doc_len(DocId id) const { return doc_len_.at(id); }
  const std::vector<std::string>& docnos() const { return docnos_; }
  const PostingsMap& all_postings() const { return postings_; }

  std::span<const Posting> postings(const std::string& term) const {
    const auto it = postings_.find(term);
    if (it == postings_.end()) return {};
    return it->second;
  }

  std::size_t df(const std::string& term) const { return postings(term).size(); }

  std::uint64_t coll_freq(const std::string& term) const {
    const auto it = coll_freq_.find(term);
    return it == coll_freq_.end() ? 0 : it->second;
  }

  std::uint32_t tf(const std::string& term, DocId doc) const {
    const auto list = postings(term);
    const auto it = std::lower_bound(list.begin(), list.end(), doc,
                                     [](const Posting& p, DocId d) { return p.doc < d; });
    return it != list.end() && it->doc == doc ? it->tf : 0;
  }

  // Appends one document given its (already normalized) index terms.
  DocId add_document(std::string docno, std::span<const std::string> terms) {
    const auto id = static_cast<DocId>(docnos_.size());
    docnos_.push_back(std::move(docno));
    doc_len_.push_back(static_cast<std::uint32_t>(terms.size()));
    total_tokens_ += terms.size();
    std::unordered_map<std::string_view, std::uint32_t> counts;
    for (const auto& t : terms) ++counts[t];
    for (const auto& [t, c] : counts) {
      std::string key(t);
      postings_[key].push_back(Posting{id, c});
      coll_freq_[std::move(key)] += c;
    }
    return id;
  }

  // Appends every document of `other`, shifting its ids past ours.
  void append(const InvertedIndex& other) {
    const auto offset = static_cast<DocId>(docnos_.size());
    docnos_.insert(docnos_.end(), other.docnos_.begin(), other.docnos_.end());
    doc_len_.insert(doc_len_.end(), other.doc_len_.begin(), other.doc_len_.end());
    total_tokens_ += other.total_tokens_;
    for (const auto& [t, list] : other.postings_) {
      auto& mine = postings_[t];
      for (const auto& p : list) mine.push_back(Posting{p.doc + offset, p.tf});
    }
    for (const auto& [t, c] : other.coll_freq_) coll_freq_[t] += c;
  }

  friend bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
    return a.docnos_ == b.docnos_ && a.doc_len_ == b.doc_len_ &&
           a.total_tokens_ == b.total_tokens_ && a.postings_ == b.postings_ &&
           a.coll_freq_ == b.coll_freq_;
  }

  static constexpr std::string_view kMagic = "POSW-INDEX";
  static constexpr int kVersion = 1;

  std::string serialize() const {
    std::string out = std::string(kMagic) + "\t" + std::to_string(kVersion) + "\n";
    out += "docs\t" + std::to_string(docnos_.size()) + "\n";
    for (std::size_t i = 0; i < docnos_.size(); ++i)
      out += docnos_[i] + "\t" + std::to_string(doc_len_[i]) + "\n";
    out += "terms\t" + std::to_string(postings_.size()) + "\n";
    for (const auto it : detail::sorted_entries(postings_)) {
      out += it->first;
      for (const auto& p : it->second)
        out += "\t" + std::to_string(p.doc) + ":" + std::to_string(p.tf);
      out += "\n";
    }
    out += "end\n";
    return out;
  }

  static InvertedIndex deserialize(std::string_view text) {
    detail::LineReader in(text, "index");
    in.header(kMagic, kVersion);
    InvertedIndex ix;
    const auto docs = in.require_number<std::size_t>("docs");
    std::string_view line;
    for (std::size_t i = 0; i < docs; ++i) {
      if (!in.next(line)) throw FormatError("index file is truncated");
      const auto f = detail::split_char(line, '\t');
      std::uint32_t len = 0;
      if (f.size() != 2 || f[0].empty() || !detail::parse_number(f[1], len))
        throw FormatError("index line " + std::to_string(in.line_no()) + ": bad document row");
      ix.docnos_.emplace_back(f[0]);
      ix.doc_len_.push_back(len);
      ix.total_tokens_ += len;
    }
    const auto terms = in.require_number<std::size_t>("terms");
    for (std::size_t i = 0; i < terms; ++i) {
      if (!in.next(line)) throw FormatError("index file is truncated");
      const auto f = detail::split_char(line, '\t');
      if (f.size() < 2 || f[0].empty())
        throw FormatError("index line " + std::to_string(in.line_no()) + ": bad postings row");
      std::string term(f[0]);
      auto& list = ix.postings_[term];
      std::uint64_t cf = 0;
      for (std::size_t k = 1; k < f.size(); ++k) {
        const auto colon = f[k].find(':');
        Posting p;
        if (colon == std::string_view::npos || !detail::parse_number(f[k].substr(0, colon), p.doc) ||
            !detail::parse_number(f[k].substr(colon + 1), p.tf) || p.doc >= docs || p.tf == 0 ||
            (!list.empty() && list.back().doc >= p.doc))
          throw FormatError("index line " + std::to_string(in.line_no()) + ": bad posting");
        list.push_back(p);
        cf += p.tf;
      }
      ix.coll_freq_[std::move(term)] = cf;
    }
    in.footer();
    return ix;
  }

  void save(const std::string& path) const { detail::write_file(path, serialize()); }
  static InvertedIndex load(const std::string& path) {
    return deserialize(detail::read_file(path));
  }

 private:
  std::vector<std::string> docnos_;
  std::vector<std::uint32_t> doc_len_;
  std::uint64_t total_tokens_ = 0;
  PostingsMap postings_;
  std::unordered_map<std::string, std::uint64_t> coll_freq_;
};

namespace detail {

inline std::vector<std::string> index_terms(const RawDocument& d, const IndexOptions& opts) {
  std::vector<std::string> out;
  out.reserve(d.text.size());
  for (const auto& tok : d.text) {
    std::string k = term_key(tok, opts.norm);
    if (!k.empty() && !(opts.remove_stopwords && is_stopword(k))) out.push_back(std::move(k));
  }
  return out;
}

inline std::vector<std::string> index_terms(const TaggedDocument& d, const IndexOptions& opts) {
  std::vector<std::string> out;
  out.reserve(d.tokens.size());
  for (const auto& tok : d.tokens) {
    std::string k = term_key(tok.surface, opts.norm);
    if (!k.empty() && !(opts.remove_stopwords && is_stopword(k))) out.push_back(std::move(k));
  }
  return out;
}

}  // namespace detail

// Works for RawDocument and TaggedDocument sequences.
template <typename Doc>
InvertedIndex build_index(std::span<const Doc> docs, const IndexOptions& opts = {},
                          unsigned threads = 1) {
  detail::check_unique_docnos(docs);
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, docs.size()));
  std::vector<InvertedIndex> partial(shards);
  parallel_for(shards, threads, [&](std::size_t s) {
    const std::size_t begin = docs.size() * s / shards;
    const std::size_t end = docs.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i)
      partial[s].add_document(docs[i].docno, detail::index_terms(docs[i], opts));
  });
  InvertedIndex out = std::move(partial.front());
  for (std::size_t s = 1; s < shards; ++s) out.append(partial[s]);
  return out;
}

template <typename Doc>
InvertedIndex build_index(const std::vector<Doc>& docs, const IndexOptions& opts = {},
                          unsigned threads = 1) {
  return build_index(std::span<const Doc>(docs), opts, threads);
}

struct Artifacts {
  InvertedIndex index;
  PosNgramStats stats;
};

// Index and POS statistics over the same tagged input with one shared
// normalization, so weight lookups line up with index terms.
inline Artifacts build_artifacts(std::span<const TaggedDocument> docs, std::size_t n,
                                 const TagSet& tags, const IndexOptions& opts = {},
                                 unsigned threads = 1) {
  detail::check_unique_docnos(docs);
  check_ngram_length(n);
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, docs.size()));
  std::vector<Artifacts> partial(shards, Artifacts{InvertedIndex{}, PosNgramStats(n, tags)});
  parallel_for(shards, threads, [&](std::size_t s) {
    const std::size_t begin = docs.size() * s / shards;
    const std::size_t end = docs.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) {
      partial[s].index.add_document(docs[i].docno, detail::index_terms(docs[i], opts));
      partial[s].stats.add_document(docs[i], opts.norm);
    }
  });
  Artifacts out = std::move(partial.front());
  for (std::size_t s = 1; s < shards; ++s) {
    out.index.append(partial[s].index);
    out.stats.merge(partial[s].stats);
  }
  return out;
}

}  // namespace posw
