#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/index.hpp"

namespace posw {

enum class ModelKind { kTfIdf, kBm25, kDirichlet };

inline std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::kTfIdf: return "tfidf";
    case ModelKind::kBm25: return "bm25";
    case ModelKind::kDirichlet: return "dirichlet";
  }
  return "?";
}

inline ModelKind parse_model(std::string_view name) {
  if (name == "tfidf") return ModelKind::kTfIdf;
  if (name == "bm25") return ModelKind::kBm25;
  if (name == "dirichlet") return ModelKind::kDirichlet;
  throw ConfigError("unknown model '" + std::string(name) + "' (valid: tfidf, bm25, dirichlet)");
}

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  double k3 = 1000.0;
};

struct ModelParams {
  Bm25Params bm25;
  double mu = 2500.0;            // Dirichlet prior
  double pivot_slope = 0.2;      // pivoted normalization slope s

  void validate(ModelKind model) const {
    if (model == ModelKind::kDirichlet && !(mu > 0.0 && std::isfinite(mu)))
      throw ConfigError("Dirichlet mu must be a positive finite number");
    if (model == ModelKind::kTfIdf && !(pivot_slope >= 0.0 && pivot_slope <= 1.0))
      throw ConfigError("pivot slope must be in [0, 1]");
    if (model == ModelKind::kBm25 && !(bm25.k1 >= 0.0 && bm25.b >= 0.0 && bm25.b <= 1.0 &&
                                       bm25.k3 >= 0.0))
      throw ConfigError("BM25 parameters out of range");
  }
};

struct ScoredDoc {
  std::string docno;
  double score = 0.0;
  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

// Per-term contributions. All logarithms are natural.

// Singhal pivoted normalization with log-log tf:
//   qtf * (1 + ln(1 + ln tf)) / ((1 - s) + s * dl/avdl) * ln((N + 1) / df)
inline double pivoted_term_score(double tf, double df, double num_docs, double dl, double avdl,
                                 double qtf, double slope) {
  if (tf <= 0.0) return 0.0;
  const double tf_part = 1.0 + std::log(1.0 + std::log(tf));
  const double norm = (1.0 - slope) + slope * dl / avdl;
  return qtf * tf_part / norm * std::log((num_docs + 1.0) / df);
}

// Robertson-Sparck Jones idf, floored at zero.
inline double bm25_idf(double df, double num_docs) {
  return std::max(0.0, std::log((num_docs - df + 0.5) / (df + 0.5)));
}

inline double bm25_term_score(double tf, double df, double num_docs, double dl, double avdl,
                              double qtf, const Bm25Params& p) {
  if (tf <= 0.0) return 0.0;
  const double k = p.k1 * ((1.0 - p.b) + p.b * dl / avdl);
  return bm25_idf(df, num_docs) * (tf * (p.k1 + 1.0)) / (tf + k) * (qtf * (p.k3 + 1.0)) /
         (qtf + p.k3);
}

// qtf * ln((tf + mu * p(t|C)) / (dl + mu)); defined for tf = 0 as long as
// p(t|C) > 0.
inline double dirichlet_term_score(double tf, double dl, double p_coll, double qtf, double mu) {
  return qtf * std::log((tf + mu * p_coll) / (dl + mu));
}

// Unique query terms with their frequencies, in first-occurrence order.
struct QueryTerm {
  std::string term;
  double qtf = 0.0;
};

inline std::vector<QueryTerm> query_terms(std::span<const std::string> terms) {
  std::vector<QueryTerm> out;
  for (const auto& t : terms) {
    auto it = std::find_if(out.begin(), out.end(), [&](const QueryTerm& q) { return q.term == t; });
    if (it == out.end())
      out.push_back(QueryTerm{t, 1.0});
    else
      it->qtf += 1.0;
  }
  return out;
}

namespace detail {

// Baseline contribution of one query term to one document; nullopt when the
// term adds nothing under this model.
inline std::optional<double> term_contribution(ModelKind model, const QueryTerm& q,
                                               std::uint32_t tf, DocId doc,
                                               const InvertedIndex& index,
                                               const ModelParams& params) {
  const double n = static_cast<double>(index.num_docs());
  const double dl = static_cast<double>(index.doc_len(doc));
  switch (model) {
    case ModelKind::kTfIdf:
      if (tf == 0) return std::nullopt;
      return pivoted_term_score(tf, static_cast<double>(index.df(q.term)), n, dl,
                                index.avg_doc_len(), q.qtf, params.pivot_slope);
    case ModelKind::kBm25:
      if (tf == 0) return std::nullopt;
      return bm25_term_score(tf, static_cast<double>(index.df(q.term)), n, dl,
                             index.avg_doc_len(), q.qtf, params.bm25);
    case ModelKind::kDirichlet: {
      const auto cf = index.coll_freq(q.term);
      if (cf == 0) return std::nullopt;
      const double p_coll = static_cast<double>(cf) / static_cast<double>(index.total_tokens());
      return dirichlet_term_score(tf, dl, p_coll, q.qtf, params.mu);
    }
  }
  return std::nullopt;
}

// Full document score. `adjust(old, term)` rewrites the contribution of each
// query term the document contains (tf > 0).
template <typename Adjust>
double score_document(ModelKind model, std::span<const QueryTerm> query, DocId doc,
                      const InvertedIndex& index, const ModelParams& params, Adjust&& adjust) {
  double score = 0.0;
  for (const auto& q : query) {
    const std::uint32_t tf = index.tf(q.term, doc);
    const auto old = term_contribution(model, q, tf, doc, index, params);
    if (!old) continue;
    score += tf > 0 ? adjust(*old, q.term) : *old;
  }
  return score;
}

inline double keep_score(double old, const std::string&) { return old; }

inline std::vector<DocId> candidates(std::span<const QueryTerm> query, const InvertedIndex& index) {
  std::vector<DocId> docs;
  for (const auto& q : query)
    for (const auto& p : index.postings(q.term)) docs.push_back(p.doc);
  std::sort(docs.begin(), docs.end());
  docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
  return docs;
}

inline void rank(std::vector<ScoredDoc>& docs, std::size_t k) {
  std::sort(docs.begin(), docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.docno < b.docno;
  });
  if (docs.size() > k) docs.resize(k);
}

template <typename Adjust>
std::vector<ScoredDoc> retrieve_with(std::span<const std::string> query_tokens,
                                     const InvertedIndex& index, ModelKind model,
                                     const ModelParams& params, std::size_t k, Adjust&& adjust) {
  params.validate(model);
  const auto query = query_terms(query_tokens);
  std::vector<ScoredDoc> out;
  for (const DocId doc : candidates(query, index))
    out.push_back(ScoredDoc{index.docno(doc),
                            score_document(model, query, doc, index, params, adjust)});
  rank(out, k);
  return out;
}

}  // namespace detail

inline double score_tfidf_pivoted(std::span<const std::string> query, DocId doc,
                                  const InvertedIndex& index, const ModelParams& params = {}) {
  return detail::score_document(ModelKind::kTfIdf, query_terms(query), doc, index, params,
                                detail::keep_score);
}

inline double score_bm25(std::span<const std::string> query, DocId doc,
                         const InvertedIndex& index, const ModelParams& params = {}) {
  return detail::score_document(ModelKind::kBm25, query_terms(query), doc, index, params,
                                detail::keep_score);
}

inline double score_dirichlet(std::span<const std::string> query, DocId doc,
                              const InvertedIndex& index, const ModelParams& params = {}) {
  params.validate(ModelKind::kDirichlet);
  return detail::score_document(ModelKind::kDirichlet, query_terms(query), doc, index, params,
                                detail::keep_score);
}

// Documents containing at least one query term, best first, ties by docno.
inline std::vector<ScoredDoc> retrieve(std::span<const std::string> query,
                                       const InvertedIndex& index, ModelKind model,
                                       const ModelParams& params, std::size_t k) {
  return detail::retrieve_with(query, index, model, params, k, detail::keep_score);
}

}  // namespace posw
