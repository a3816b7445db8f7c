#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/models.hpp"
#include "posw/util.hpp"

namespace posw {

// Orders numeric qids numerically ("99" < "100"), anything else lexically.
struct QidLess {
  bool operator()(const std::string& a, const std::string& b) const {
    const auto numeric = [](const std::string& s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (numeric(a) && numeric(b)) {
      const auto strip = [](const std::string& s) {
        const auto p = s.find_first_not_of('0');
        return p == std::string::npos ? std::string_view("0") : std::string_view(s).substr(p);
      };
      const auto x = strip(a), y = strip(b);
      if (x.size() != y.size()) return x.size() < y.size();
      if (x != y) return x < y;
    }
    return a < b;
  }
};

struct RunResult {
  std::string tag = "posw";
  std::map<std::string, std::vector<ScoredDoc>, QidLess> queries;  // rank order
  friend bool operator==(const RunResult&, const RunResult&) = default;
};

inline constexpr std::size_t kDefaultDepth = 1000;

// `qid Q0 docno rank score runtag`, queries in qid order.
inline std::string write_run(const RunResult& run) {
  std::string out;
  for (const auto& [qid, docs] : run.queries)
    for (std::size_t i = 0; i < docs.size(); ++i)
      out += qid + " Q0 " + docs[i].docno + " " + std::to_string(i + 1) + " " +
             detail::format_double(docs[i].score) + " " + run.tag + "\n";
  return out;
}

inline RunResult parse_run(std::string_view text) {
  RunResult run;
  std::map<std::string, std::vector<std::pair<std::size_t, ScoredDoc>>, QidLess> rows;
  bool have_tag = false;
  detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto f = detail::split_ws(line);
    if (f.empty()) return;
    std::size_t rank = 0;
    double score = 0;
    if (f.size() != 6 || !detail::parse_number(f[3], rank) || !detail::parse_number(f[4], score))
      throw ParseError("run line " + std::to_string(no) + ": expected 'qid Q0 docno rank score tag'",
                       no);
    if (!have_tag) {
      run.tag = std::string(f[5]);
      have_tag = true;
    }
    rows[std::string(f[0])].emplace_back(rank, ScoredDoc{std::string(f[2]), score});
  });
  for (auto& [qid, list] : rows) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::unordered_set<std::string> seen;
    auto& docs = run.queries[qid];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].first != i + 1)
        throw DataError("run: ranks for query " + qid + " are not contiguous from 1");
      if (!seen.insert(list[i].second.docno).second)
        throw DataError("run: duplicate docno " + list[i].second.docno + " for query " + qid);
      docs.push_back(std::move(list[i].second));
    }
  }
  return run;
}

// (1/R) * sum over relevant retrieved docs of precision at their rank.
// Returns nullopt when the query has no relevant documents.
inline std::optional<double> average_precision(std::span<const ScoredDoc> ranked,
                                               const Qrels& qrels, const std::string& qid) {
  const std::size_t total_relevant = qrels.num_relevant(qid);
  if (total_relevant == 0) return std::nullopt;
  double sum = 0.0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (qrels.is_relevant(qid, ranked[i].docno)) {
      ++found;
      sum += static_cast<double>(found) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(total_relevant);
}

// Short lists count as padded with non-relevant documents.
inline double precision_at(std::span<const ScoredDoc> ranked, const Qrels& qrels,
                           const std::string& qid, std::size_t cutoff = 10) {
  if (cutoff == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(cutoff, ranked.size()); ++i)
    hits += qrels.is_relevant(qid, ranked[i].docno);
  return static_cast<double>(hits) / static_cast<double>(cutoff);
}

struct QueryEval {
  std::string qid;
  double ap = 0.0;
  double p10 = 0.0;
  std::size_t relevant = 0;
  std::size_t retrieved = 0;
};

struct EvalReport {
  std::vector<QueryEval> queries;          // qid order
  std::vector<std::string> no_relevant;    // judged queries excluded from MAP
  double map = 0.0;
  double mean_p10 = 0.0;

  std::vector<double> ap_values() const {
    std::vector<double> v;
    for (const auto& q : queries) v.push_back(q.ap);
    return v;
  }
  std::vector<double> p10_values() const {
    std::vector<double> v;
    for (const auto& q : queries) v.push_back(q.p10);
    return v;
  }
};

// Evaluates every judged query (optionally restricted to `subset`). A judged
// query absent from the run scores 0. Lists are cut at `depth`.
inline EvalReport evaluate(const RunResult& run, const Qrels& qrels,
                           std::size_t depth = kDefaultDepth,
                           const std::set<std::string>* subset = nullptr) {
  EvalReport report;
  std::vector<std::string> qids = qrels.qids();
  std::sort(qids.begin(), qids.end(), QidLess{});
  for (const auto& qid : qids) {
    if (subset && !subset->contains(qid)) continue;
    std::span<const ScoredDoc> ranked;
    if (const auto it = run.queries.find(qid); it != run.queries.end()) ranked = it->second;
    if (ranked.size() > depth) ranked = ranked.first(depth);
    const auto ap = average_precision(ranked, qrels, qid);
    if (!ap) {
      report.no_relevant.push_back(qid);
      continue;
    }
    report.queries.push_back(
        QueryEval{qid, *ap, precision_at(ranked, qrels, qid, 10), qrels.num_relevant(qid), ranked.size()});
  }
  if (!report.queries.empty()) {
    double ap_sum = 0.0, p_sum = 0.0;
    for (const auto& q : report.queries) {
      ap_sum += q.ap;
      p_sum += q.p10;
    }
    report.map = ap_sum / static_cast<double>(report.queries.size());
    report.mean_p10 = p_sum / static_cast<double>(report.queries.size());
  }
  return report;
}

// Average ranks (1-based), ties share the mean of their positions. Values
// within `tie_tolerance` (relative above 1) of their sorted neighbour are tied.
inline std::vector<double> average_ranks(std::span<const double> values, double tie_tolerance = 0.0) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] - values[order[j - 1]] <=
                                     tie_tolerance * std::max(1.0, std::abs(values[order[j]])))
      ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

struct WilcoxonResult {
  std::size_t n = 0;          // pairs with a nonzero difference
  double w_plus = 0.0;        // rank sum of positive differences (treatment > baseline)
  double w_minus = 0.0;
  double p_greater = 1.0;     // P(W+ >= observed)
  double p_less = 1.0;        // P(W+ <= observed)
  double p_one_sided = 1.0;   // smaller tail
  double p_two_sided = 1.0;
  bool exact = false;
  bool degenerate = false;    // every difference was zero
};

inline constexpr std::size_t kWilcoxonExactMax = 25;
inline constexpr double kZeroDifference = 1e-12;

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

// Wilcoxon matched-pairs signed-ranks test on treatment - baseline.
// Zero differences are dropped, tied magnitudes share average ranks. Exact
// null distribution for n <= 25, normal approximation with continuity and
// tie correction above.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> baseline,
                                           std::span<const double> treatment) {
  if (baseline.size() != treatment.size())
    throw DataError("wilcoxon: paired samples differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const double d = treatment[i] - baseline[i];
    if (std::abs(d) > kZeroDifference) diffs.push_back(d);
  }
  WilcoxonResult r;
  r.n = diffs.size();
  if (diffs.empty()) {
    r.degenerate = true;
    return r;
  }
  std::vector<double> magnitudes;
  for (const double d : diffs) magnitudes.push_back(std::abs(d));
  const auto ranks = average_ranks(magnitudes, kZeroDifference);
  for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];

  if (r.n <= kWilcoxonExactMax) {
    // Doubled ranks are integers; count sign assignments per doubled sum.
    std::vector<long> doubled;
    long total = 0;
    for (const double rk : ranks) {
      doubled.push_back(std::lround(2.0 * rk));
      total += doubled.back();
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    long reach = 0;
    for (const long d : doubled) {
      reach += d;
      for (long s = reach; s >= d; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - d)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    const long observed = std::lround(2.0 * r.w_plus);
    double ge = 0.0, le = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s >= observed) ge += ways[static_cast<std::size_t>(s)];
      if (s <= observed) le += ways[static_cast<std::size_t>(s)];
    }
    r.p_greater = ge / all;
    r.p_less = le / all;
    r.exact = true;
  } else {
    const double n = static_cast<double>(r.n);
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    std::map<double, double> groups;
    for (const double rk : ranks) groups[rk] += 1.0;
    for (const auto& [rk, t] : groups) tie_term += t * t * t - t;
    const double sd = std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0);
    r.p_greater = 1.0 - detail::normal_cdf((r.w_plus - mean - 0.5) / sd);
    r.p_less = detail::normal_cdf((r.w_plus - mean + 0.5) / sd);
  }
  r.p_one_sided = std::min(r.p_greater, r.p_less);
  r.p_two_sided = std::min(1.0, 2.0 * r.p_one_sided);
  return r;
}

// "**" for p < 0.01, "*" for p < 0.05.
inline std::string_view significance_marker(const WilcoxonResult& r) {
  if (r.degenerate) return "";
  if (r.p_two_sided < 0.01) return "**";
  if (r.p_two_sided < 0.05) return "*";
  return "";
}

// Spearman's rho of two aligned samples: Pearson correlation of their
// average ranks.
inline double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("spearman: samples differ in length");
  if (a.size() < 3) throw DataError("spearman: need at least 3 common items");
  const auto ra = average_ranks(a, kZeroDifference), rb = average_ranks(b, kZeroDifference);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) throw DataError("spearman: one ranking is constant");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Over the keys both tables share.
inline double spearman_rho(const std::unordered_map<std::string, double>& a,
                           const std::unordered_map<std::string, double>& b) {
  std::vector<std::string> common;
  for (const auto& [k, _] : a)
    if (b.contains(k)) common.push_back(k);
  std::sort(common.begin(), common.end());
  if (common.size() < 3)
    throw DataError("spearman: need at least 3 common terms, have " + std::to_string(common.size()));
  std::vector<double> va, vb;
  for (const auto& k : common) {
    va.push_back(a.at(k));
    vb.push_back(b.at(k));
  }
  return spearman_rho(va, vb);
}

}  // namespace posw
