#pragma once

// Brute-force reference computations for tests. Nothing here calls into the
// posw library; every count and formula is recomputed from scratch on plain
// containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Doc {
  std::string docno;
  std::vector<std::string> terms;  // already lowercase, non-empty
  std::vector<int> tags;           // same length as terms
};

enum class Weight { MlBoolean, MlWeighted, Idf, Ridf, Bs };

struct Counts {
  std::map<std::string, long> ngram;                          // POS n-gram -> windows
  std::map<std::string, std::map<std::string, long>> contains;  // term -> n-gram -> windows
  long windows = 0;
};

inline Counts count_windows(const std::vector<Doc>& docs, std::size_t n) {
  Counts c;
  for (const auto& d : docs) {
    if (d.terms.size() < n) continue;
    for (std::size_t s = 0; s + n <= d.terms.size(); ++s) {
      std::string key;
      for (std::size_t i = s; i < s + n; ++i) key += std::to_string(d.tags[i]) + ",";
      c.ngram[key] += 1;
      c.windows += 1;
      std::set<std::string> inside(d.terms.begin() + static_cast<long>(s),
                                   d.terms.begin() + static_cast<long>(s + n));
      for (const auto& t : inside) c.contains[t][key] += 1;
    }
  }
  return c;
}

inline std::map<std::string, double> brute_weights(const std::vector<Doc>& docs, std::size_t n,
                                                   Weight kind) {
  const Counts c = count_windows(docs, n);
  const double types = static_cast<double>(c.ngram.size());
  std::map<std::string, double> out;
  for (const auto& [term, per_ngram] : c.contains) {
    const double pf = static_cast<double>(per_ngram.size());
    double tf = 0;
    for (const auto& [g, k] : per_ngram) tf += static_cast<double>(k);
    double v = 0;
    switch (kind) {
      case Weight::MlBoolean:
        for (const auto& [g, k] : per_ngram)
          v += (static_cast<double>(c.ngram.at(g)) / static_cast<double>(c.windows)) * (1.0 / pf);
        break;
      case Weight::MlWeighted:
        for (const auto& [g, k] : per_ngram)
          v += (static_cast<double>(c.ngram.at(g)) / static_cast<double>(c.windows)) *
               (static_cast<double>(k) / tf);
        break;
      case Weight::Idf:
        v = std::log(types / pf);
        break;
      case Weight::Ridf:
        v = std::log(types / pf) - (-std::log(1.0 - std::exp(-tf / types)));
        break;
      case Weight::Bs:
        v = std::log(1.0 + (tf - pf > 0 ? tf - pf : 0.0));
        break;
    }
    out[term] = v;
  }
  return out;
}

enum class Model { TfIdf, Bm25, Dirichlet };

struct Params {
  double k1 = 1.2, b = 0.75, k3 = 1000.0;
  double mu = 2500.0;
  double slope = 0.2;
};

// Score of every document matching at least one query term, by direct
// counting over the raw term lists. pos_weight/w add the integration bonus.
inline std::map<std::string, double> brute_score(
    Model model, const std::vector<std::string>& query, const std::vector<Doc>& docs,
    const Params& p, double w = 0.0, const std::map<std::string, double>& pos_weight = {}) {
  const double N = static_cast<double>(docs.size());
  double total_len = 0;
  for (const auto& d : docs) total_len += static_cast<double>(d.terms.size());
  const double avdl = N > 0 ? total_len / N : 0.0;
  std::map<std::string, double> qtf;
  for (const auto& t : query) qtf[t] += 1;

  auto count_in = [](const std::vector<std::string>& v, const std::string& t) {
    double k = 0;
    for (const auto& x : v) k += (x == t);
    return k;
  };
  std::map<std::string, double> out;
  for (const auto& d : docs) {
    bool matched = false;
    for (const auto& [t, _] : qtf) matched |= count_in(d.terms, t) > 0;
    if (!matched) continue;
    const double dl = static_cast<double>(d.terms.size());
    double score = 0;
    for (const auto& [t, q] : qtf) {
      const double tf = count_in(d.terms, t);
      double df = 0, cf = 0;
      for (const auto& other : docs) {
        const double k = count_in(other.terms, t);
        df += k > 0;
        cf += k;
      }
      double s = 0;
      bool contributes = tf > 0;
      if (model == Model::TfIdf && tf > 0) {
        s = q * (1 + std::log(1 + std::log(tf))) / ((1 - p.slope) + p.slope * dl / avdl) *
            std::log((N + 1) / df);
      } else if (model == Model::Bm25 && tf > 0) {
        double idf = std::log((N - df + 0.5) / (df + 0.5));
        if (idf < 0) idf = 0;
        const double K = p.k1 * ((1 - p.b) + p.b * dl / avdl);
        s = idf * (tf * (p.k1 + 1)) / (tf + K) * (q * (p.k3 + 1)) / (q + p.k3);
      } else if (model == Model::Dirichlet && cf > 0) {
        s = q * std::log((tf + p.mu * (cf / total_len)) / (dl + p.mu));
        contributes = true;
      }
      if (!contributes) continue;
      if (tf > 0) {
        const auto it = pos_weight.find(t);
        s += w * (it == pos_weight.end() ? 0.0 : it->second);
      }
      score += s;
    }
    out[d.docno] = score;
  }
  return out;
}

// Rank of x among values: #less + (#equal + 1) / 2, equality up to 1e-12
// (relative above 1) so rounding noise does not split ties.
inline double naive_rank(const std::vector<double>& values, double x) {
  double less = 0, equal = 0;
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  for (const double v : values) {
    less += v < x - tol;
    equal += std::fabs(v - x) <= tol;
  }
  return less + (equal + 1) / 2;
}

struct SignedRankTail {
  double p_greater = 1.0;  // P(W+ >= observed)
  double p_less = 1.0;     // P(W+ <= observed)
  double w_plus = 0.0;
};

// Exact null distribution by visiting all 2^n sign assignments.
inline SignedRankTail wilcoxon_enumerate(const std::vector<double>& baseline,
                                         const std::vector<double>& treatment) {
  std::vector<double> diffs;
  for (std::size_t i = 0; i < baseline.size(); ++i)
    if (treatment[i] - baseline[i] != 0) diffs.push_back(treatment[i] - baseline[i]);
  std::vector<double> mags;
  for (const double d : diffs) mags.push_back(std::fabs(d));
  std::vector<double> ranks;
  for (const double m : mags) ranks.push_back(naive_rank(mags, m));
  SignedRankTail r;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    if (diffs[i] > 0) r.w_plus += ranks[i];
  const std::uint64_t total = std::uint64_t{1} << diffs.size();
  double ge = 0, le = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) s += ranks[i];
    ge += s >= r.w_plus - 1e-9;
    le += s <= r.w_plus + 1e-9;
  }
  r.p_greater = ge / static_cast<double>(total);
  r.p_less = le / static_cast<double>(total);
  return r;
}

// Pearson correlation of naive average ranks.
inline double spearman_definitional(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> ra, rb;
  for (std::size_t i = 0; i < n; ++i) {
    ra.push_back(naive_rank(a, a[i]));
    rb.push_back(naive_rank(b, b[i]));
  }
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i] / static_cast<double>(n);
    mb += rb[i] / static_cast<double>(n);
  }
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace oracle
