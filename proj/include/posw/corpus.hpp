#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "posw/error.hpp"
#include "posw/tagger.hpp"
#include "posw/text.hpp"
#include "posw/util.hpp"

namespace posw {

struct RawDocument {
  std::string docno;
  std::vector<std::string> text;
  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

struct TaggedToken {
  std::string surface;
  CoarseTag tag;
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct TaggedDocument {
  std::string docno;
  std::vector<TaggedToken> tokens;
  friend bool operator==(const TaggedDocument&, const TaggedDocument&) = default;
};

struct TaggedCorpus {
  TagSet tags;
  std::vector<TaggedDocument> docs;
  std::size_t unknown_tags = 0;  // fine tags mapped to OTHER for lack of an entry
};

struct Query {
  std::string qid;
  std::vector<std::string> terms;
  friend bool operator==(const Query&, const Query&) = default;
};

struct QrelEntry {
  std::string qid;
  std::string docno;
  int relevance = 0;
};

// Relevance judgments, keyed by qid then docno. Grades >= 1 count as relevant.
class Qrels {
 public:
  void add(const QrelEntry& e) {
    if (!judgments_[e.qid].emplace(e.docno, e.relevance).second)
      throw DataError("duplicate qrels entry for (" + e.qid + ", " + e.docno + ")");
  }

  bool is_relevant(const std::string& qid, const std::string& docno) const {
    const auto q = judgments_.find(qid);
    if (q == judgments_.end()) return false;
    const auto d = q->second.find(docno);
    return d != q->second.end() && d->second >= 1;
  }

  std::size_t num_relevant(const std::string& qid) const {
    const auto q = judgments_.find(qid);
    if (q == judgments_.end()) return 0;
    std::size_t n = 0;
    for (const auto& [doc, rel] : q->second) n += rel >= 1;
    return n;
  }

  std::vector<std::string> qids() const {
    std::vector<std::string> out;
    for (const auto& [qid, _] : judgments_) out.push_back(qid);
    return out;
  }

  bool empty() const { return judgments_.empty(); }

 private:
  std::map<std::string, std::map<std::string, int>> judgments_;
};

namespace detail {

inline void check_unique_docnos(const auto& docs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& d : docs)
    if (!seen.insert(d.docno).second)
      throw DataError("duplicate docno '" + d.docno + "'");
}

inline std::string strip_markup(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') {
      in_tag = true;
      out += ' ';
    } else if (c == '>' && in_tag) {
      in_tag = false;
    } else if (!in_tag) {
      out += c;
    }
  }
  return out;
}

}  // namespace detail

// Concatenated <DOC> blocks. Text is the tokenized content of every <TEXT>
// region with inner markup removed; everything else in a block is ignored.
inline std::vector<RawDocument> parse_trec_sgml(std::string_view input) {
  static constexpr std::string_view kOpen = "<DOC>", kClose = "</DOC>";
  static constexpr std::string_view kNoOpen = "<DOCNO>", kNoClose = "</DOCNO>";
  static constexpr std::string_view kTextOpen = "<TEXT>", kTextClose = "</TEXT>";
  std::vector<RawDocument> docs;
  std::size_t pos = 0;
  for (;;) {
    while (pos < input.size() && detail::is_ascii_space(input[pos])) ++pos;
    if (pos >= input.size()) break;
    if (input.compare(pos, kOpen.size(), kOpen) != 0)
      throw ParseError("expected <DOC> at byte " + std::to_string(pos), pos);
    const std::size_t body = pos + kOpen.size();
    const std::size_t end = input.find(kClose, body);
    if (end == std::string_view::npos)
      throw ParseError("unclosed <DOC> starting at byte " + std::to_string(pos), pos);
    const std::size_t nested = input.find(kOpen, body);
    if (nested != std::string_view::npos && nested < end)
      throw ParseError("unclosed <DOC> starting at byte " + std::to_string(pos), pos);
    const std::string_view block = input.substr(body, end - body);

    const std::size_t no_open = block.find(kNoOpen);
    const std::size_t no_close = no_open == std::string_view::npos
                                     ? std::string_view::npos
                                     : block.find(kNoClose, no_open);
    if (no_open == std::string_view::npos || no_close == std::string_view::npos)
      throw ParseError("missing <DOCNO> in <DOC> at byte " + std::to_string(pos), pos);
    if (block.find(kNoOpen, no_close) != std::string_view::npos)
      throw ParseError("more than one <DOCNO> in <DOC> at byte " + std::to_string(pos),
                       pos);
    RawDocument doc;
    doc.docno = std::string(detail::trim(
        block.substr(no_open + kNoOpen.size(), no_close - no_open - kNoOpen.size())));
    if (doc.docno.empty())
      throw ParseError("empty <DOCNO> in <DOC> at byte " + std::to_string(pos), pos);

    std::size_t t = 0;
    while ((t = block.find(kTextOpen, t)) != std::string_view::npos) {
      const std::size_t t_body = t + kTextOpen.size();
      const std::size_t t_end = block.find(kTextClose, t_body);
      if (t_end == std::string_view::npos)
        throw ParseError("unclosed <TEXT> at byte " + std::to_string(body + t), body + t);
      for (auto& tok : tokenize(detail::strip_markup(block.substr(t_body, t_end - t_body))))
        doc.text.push_back(std::move(tok));
      t = t_end + kTextClose.size();
    }
    docs.push_back(std::move(doc));
    pos = end + kClose.size();
  }
  detail::check_unique_docnos(docs);
  return docs;
}

enum class UnknownTagPolicy { kMapToOther, kError };

// `#DOC <docno>` lines open documents; token lines are `surface<TAB>tag`;
// blank lines are ignored. Tags may be fine-grained (collapsed via `map`) or
// already coarse.
inline TaggedCorpus parse_tagged(std::string_view input,
                                 const CollapseMap& map = CollapseMap::default_penn(),
                                 UnknownTagPolicy policy = UnknownTagPolicy::kMapToOther) {
  TaggedCorpus corpus{map.tags(), {}, 0};
  detail::for_each_line(input, [&](std::string_view line, std::size_t no) {
    if (detail::trim(line).empty()) return;
    if (line.starts_with("#DOC")) {
      const std::string_view id = detail::trim(line.substr(4));
      if (id.empty() || (line.size() > 4 && !detail::is_ascii_space(line[4])))
        throw ParseError("line " + std::to_string(no) + ": malformed #DOC header", no);
      corpus.docs.push_back(TaggedDocument{std::string(id), {}});
      return;
    }
    if (corpus.docs.empty())
      throw ParseError("line " + std::to_string(no) + ": token before first #DOC", no);
    const auto fields = detail::split_char(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || detail::trim(fields[1]).empty())
      throw ParseError("line " + std::to_string(no) + ": expected surface<TAB>tag, got " +
                           std::to_string(fields.size()) + " field(s)",
                       no);
    const std::string_view fine = detail::trim(fields[1]);
    auto tag = map.try_collapse(fine);
    if (!tag) {
      if (policy == UnknownTagPolicy::kError)
        throw ParseError("line " + std::to_string(no) + ": unknown tag '" +
                             std::string(fine) + "'",
                         no);
      ++corpus.unknown_tags;
      tag = map.tags().other();
    }
    corpus.docs.back().tokens.push_back(TaggedToken{std::string(fields[0]), *tag});
  });
  detail::check_unique_docnos(corpus.docs);
  return corpus;
}

inline std::string write_tagged(std::span<const TaggedDocument> docs, const TagSet& tags) {
  std::string out;
  for (const auto& d : docs) {
    out += "#DOC ";
    out += d.docno;
    out += '\n';
    for (const auto& t : d.tokens) {
      out += t.surface;
      out += '\t';
      out += tags.name(t.tag);
      out += '\n';
    }
  }
  return out;
}

// Tags raw documents with the fallback tagger.
inline std::vector<TaggedDocument> tag_documents(std::span<const RawDocument> docs,
                                                 const Lexicon& lexicon,
                                                 const TagSet& tags) {
  std::vector<TaggedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    const auto tagged = tag_fallback(d.text, lexicon, tags);
    TaggedDocument td{d.docno, {}};
    td.tokens.reserve(d.text.size());
    for (std::size_t i = 0; i < d.text.size(); ++i)
      td.tokens.push_back(TaggedToken{d.text[i], tagged[i]});
    out.push_back(std::move(td));
  }
  return out;
}

// One query per line: `qid<TAB>title terms`.
inline std::vector<Query> parse_topics(std::string_view input,
                                       const NormalizeOptions& norm = {}) {
  std::vector<Query> out;
  std::set<std::string> seen;
  detail::for_each_line(input, [&](std::string_view line, std::size_t no) {
    if (detail::trim(line).empty()) return;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError("topics line " + std::to_string(no) + ": expected qid<TAB>title", no);
    Query q{std::string(detail::trim(line.substr(0, tab))), {}};
    if (q.qid.empty())
      throw ParseError("topics line " + std::to_string(no) + ": empty qid", no);
    for (const auto& tok : tokenize(line.substr(tab + 1))) {
      std::string term = normalize(tok, norm);
      if (!term.empty()) q.terms.push_back(std::move(term));
    }
    if (q.terms.empty())
      throw ParseError("topics line " + std::to_string(no) + ": query '" + q.qid +
                           "' has no terms",
                       no);
    if (!seen.insert(q.qid).second)
      throw DataError("duplicate qid '" + q.qid + "' in topics");
    out.push_back(std::move(q));
  });
  return out;
}

// TREC qrels: `qid iter docno rel`.
inline Qrels parse_qrels(std::string_view input) {
  Qrels qrels;
  detail::for_each_line(input, [&](std::string_view line, std::size_t no) {
    const auto f = detail::split_ws(line);
    if (f.empty()) return;
    int rel = 0;
    if (f.size() != 4 || !detail::parse_number(f[3], rel))
      throw ParseError("qrels line " + std::to_string(no) + ": expected 'qid 0 docno rel'",
                       no);
    qrels.add(QrelEntry{std::string(f[0]), std::string(f[2]), rel});
  });
  return qrels;
}

}  // namespace posw
