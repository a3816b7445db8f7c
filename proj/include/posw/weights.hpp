#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "posw/error.hpp"
#include "posw/posstats.hpp"
#include "posw/util.hpp"

namespace posw {

enum class WeightKind { kPosMlBoolean, kPosMlWeighted, kPosIdf, kPosRidf, kPosBs };

inline constexpr std::array<WeightKind, 5> kAllWeightKinds = {
    WeightKind::kPosMlBoolean, WeightKind::kPosMlWeighted, WeightKind::kPosIdf,
    WeightKind::kPosRidf, WeightKind::kPosBs};

inline std::string_view to_string(WeightKind k) {
  switch (k) {
    case WeightKind::kPosMlBoolean: return "pos_ml_boolean";
    case WeightKind::kPosMlWeighted: return "pos_ml_weighted";
    case WeightKind::kPosIdf: return "pos_idf";
    case WeightKind::kPosRidf: return "pos_ridf";
    case WeightKind::kPosBs: return "pos_bs";
  }
  return "?";
}

inline WeightKind parse_weight_kind(std::string_view name) {
  for (const auto k : kAllWeightKinds)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown weight '" + std::string(name) +
                    "' (valid: pos_ml_boolean, pos_ml_weighted, pos_idf, pos_ridf, pos_bs)");
}

enum class MlMode { kBoolean, kWeighted };

// Total-probability weight: sum over the n-grams containing the term of
// p(I|POS) * p(POS|t), with p(I|POS) the n-gram's maximum-likelihood share
// of all windows. p(POS|t) is 1/pf (boolean) or c(t,POS)/TF (weighted).
// nullopt when the term has no POS statistics.
inline std::optional<double> ml_weight(const std::string& term, const PosNgramStats& stats,
                                       MlMode mode) {
  const auto* ngrams = stats.term_ngrams(term);
  if (!ngrams || ngrams->empty()) return std::nullopt;
  const double total = static_cast<double>(stats.total_windows());
  const double pf = static_cast<double>(ngrams->size());
  const double tf = static_cast<double>(stats.tf(term));
  // Accumulate in key order so the sum is reproducible across hash layouts.
  double sum = 0.0;
  for (const auto it : detail::sorted_entries(*ngrams)) {
    const double p_informative = static_cast<double>(stats.count(it->first)) / total;
    const double p_ngram_given_term =
        mode == MlMode::kBoolean ? 1.0 / pf : static_cast<double>(it->second) / tf;
    sum += p_informative * p_ngram_given_term;
  }
  return sum;
}

inline std::optional<double> pos_idf(const std::string& term, const PosNgramStats& stats) {
  const auto pf = stats.pf(term);
  if (pf == 0) return std::nullopt;
  return std::log(static_cast<double>(stats.distinct_types()) / static_cast<double>(pf));
}

// Poisson-expected pos_idf: -log(1 - exp(-TF/|C|)).
inline std::optional<double> expected_idf(const std::string& term, const PosNgramStats& stats) {
  const auto tf = stats.tf(term);
  if (tf == 0) return std::nullopt;
  const double rate = static_cast<double>(tf) / static_cast<double>(stats.distinct_types());
  return -std::log(-std::expm1(-rate));
}

inline std::optional<double> pos_ridf(const std::string& term, const PosNgramStats& stats) {
  const auto idf = pos_idf(term, stats);
  if (!idf) return std::nullopt;
  return *idf - *expected_idf(term, stats);
}

// log(1 + max(0, TF - pf)).
inline std::optional<double> pos_bs(const std::string& term, const PosNgramStats& stats) {
  const auto pf = stats.pf(term);
  if (pf == 0) return std::nullopt;
  const auto tf = stats.tf(term);
  const double excess = tf > pf ? static_cast<double>(tf - pf) : 0.0;
  return std::log1p(excess);
}

inline std::optional<double> compute_weight(WeightKind kind, const std::string& term,
                                            const PosNgramStats& stats) {
  switch (kind) {
    case WeightKind::kPosMlBoolean: return ml_weight(term, stats, MlMode::kBoolean);
    case WeightKind::kPosMlWeighted: return ml_weight(term, stats, MlMode::kWeighted);
    case WeightKind::kPosIdf: return pos_idf(term, stats);
    case WeightKind::kPosRidf: return pos_ridf(term, stats);
    case WeightKind::kPosBs: return pos_bs(term, stats);
  }
  return std::nullopt;
}

// Per-term weights of one kind. Lookups of unknown terms return the default
// (0, i.e. no adjustment).
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(WeightKind kind, std::unordered_map<std::string, double> values,
              std::size_t n = 0, std::size_t distinct_types = 0, double default_value = 0.0)
      : kind_(kind),
        values_(std::move(values)),
        n_(n),
        distinct_types_(distinct_types),
        default_value_(default_value) {}

  WeightKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::size_t distinct_types() const { return distinct_types_; }
  double default_value() const { return default_value_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::unordered_map<std::string, double>& values() const { return values_; }

  bool contains(const std::string& term) const { return values_.contains(term); }

  double operator()(const std::string& term) const {
    const auto it = values_.find(term);
    return it == values_.end() ? default_value_ : it->second;
  }

  // `# kind=<k> n=<n> distinct_types=<C>` then `term<TAB>kind<TAB>value`,
  // sorted by term. Values use shortest round-trip formatting.
  std::string to_tsv() const {
    std::string out = "# kind=" + std::string(to_string(kind_)) + " n=" + std::to_string(n_) +
                      " distinct_types=" + std::to_string(distinct_types_) + "\n";
    std::map<std::string_view, double> sorted(values_.begin(), values_.end());
    for (const auto& [term, v] : sorted)
      out += std::string(term) + "\t" + std::string(to_string(kind_)) + "\t" +
             detail::format_double(v) + "\n";
    return out;
  }

  static WeightTable from_tsv(std::string_view text) {
    std::optional<WeightKind> kind;
    std::size_t n = 0, types = 0;
    std::unordered_map<std::string, double> values;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
      if (line.empty()) return;
      if (no == 1) {
        if (!line.starts_with("# ")) throw FormatError("weight table: missing header line");
        for (const auto field : detail::split_ws(line.substr(2))) {
          const auto eq = field.find('=');
          if (eq == std::string_view::npos) throw FormatError("weight table: bad header field");
          const auto key = field.substr(0, eq), val = field.substr(eq + 1);
          if (key == "kind") kind = parse_weight_kind(val);
          else if (key == "n") detail::parse_number(val, n);
          else if (key == "distinct_types") detail::parse_number(val, types);
        }
        if (!kind) throw FormatError("weight table: header does not name a kind");
        return;
      }
      const auto f = detail::split_char(line, '\t');
      double v = 0;
      if (f.size() != 3 || !detail::parse_number(f[2], v) || !std::isfinite(v))
        throw ParseError("weight table line " + std::to_string(no) + ": expected term<TAB>kind<TAB>value", no);
      if (parse_weight_kind(f[1]) != *kind)
        throw ParseError("weight table line " + std::to_string(no) + ": kind does not match header", no);
      values[std::string(f[0])] = v;
    });
    if (!kind) throw FormatError("weight table is empty");
    return WeightTable(*kind, std::move(values), n, types);
  }

 private:
  WeightKind kind_ = WeightKind::kPosIdf;
  std::unordered_map<std::string, double> values_;
  std::size_t n_ = 0;
  std::size_t distinct_types_ = 0;
  double default_value_ = 0.0;
};

inline WeightTable build_table(const PosNgramStats& stats, WeightKind kind) {
  std::unordered_map<std::string, double> values;
  values.reserve(stats.term_map().size());
  for (const auto& [term, _] : stats.term_map())
    if (auto v = compute_weight(kind, term, stats)) values.emplace(term, *v);
  return WeightTable(kind, std::move(values), stats.n(), stats.distinct_types());
}

}  // namespace posw
