#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/eval.hpp"
#include "posw/index.hpp"
#include "posw/integrate.hpp"
#include "posw/models.hpp"
#include "posw/posstats.hpp"
#include "posw/util.hpp"
#include "posw/weights.hpp"

namespace posw {

// Every w value in the published sweeps, from 0 to 50000.
inline std::vector<double> default_w_grid() {
  return {0,   0.1, 0.2, 0.5,  1,    2,    3,    5,     10,    15,    20,
          30,  50,  100, 200,  1000, 2000, 5000, 10000, 20000, 25000, 50000};
}

// ---------------------------------------------------------------------------
// On-disk collection: index, POS statistics and the normalization they share.

struct Collection {
  InvertedIndex index;
  PosNgramStats stats;
  IndexOptions options;
};

namespace files {
inline constexpr const char* kIndex = "index.posw";
inline constexpr const char* kStats = "posstats.posw";
inline constexpr const char* kMeta = "meta.posw";
}  // namespace files

inline void save_collection(const Collection& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  c.index.save((dir / files::kIndex).string());
  c.stats.save((dir / files::kStats).string());
  std::string meta = "POSW-META\t1\n";
  meta += "stem\t" + std::to_string(c.options.norm.stem ? 1 : 0) + "\n";
  meta += "stopwords\t" + std::to_string(c.options.remove_stopwords ? 1 : 0) + "\n";
  meta += "end\n";
  detail::write_file((dir / files::kMeta).string(), meta);
}

inline Collection load_collection(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw FormatError("index directory '" + dir.string() + "' not found");
  Collection c;
  const std::string meta = detail::read_file((dir / files::kMeta).string());
  detail::LineReader in(meta, "meta");
  in.header("POSW-META", 1);
  c.options.norm.stem = in.require_number<int>("stem") != 0;
  c.options.remove_stopwords = in.require_number<int>("stopwords") != 0;
  in.footer();
  c.index = InvertedIndex::load((dir / files::kIndex).string());
  c.stats = PosNgramStats::load((dir / files::kStats).string());
  return c;
}

// Shaped like the collection statistics table: documents, unique terms and
// distinct POS n-gram types.
inline std::string collection_summary(const Collection& c) {
  return "documents\t" + std::to_string(c.index.num_docs()) + "\n" +
         "terms (unique)\t" + std::to_string(c.index.vocabulary_size()) + "\n" +
         "POS " + std::to_string(c.stats.n()) + "-grams\t" +
         std::to_string(c.stats.distinct_types()) + "\n";
}

// ---------------------------------------------------------------------------
// Running queries.

struct RunSpec {
  ModelKind model = ModelKind::kBm25;
  ModelParams params;
  const WeightTable* weights = nullptr;  // nullptr: baseline
  double w = 0.0;
  std::size_t depth = kDefaultDepth;
  std::string tag = "posw";
};

inline RunResult run_queries(std::span<const Query> queries, const InvertedIndex& index,
                             const RunSpec& spec, unsigned threads = 1) {
  spec.params.validate(spec.model);
  std::vector<std::vector<ScoredDoc>> lists(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    if (spec.weights)
      lists[i] = retrieve_integrated(queries[i].terms, index, spec.model, spec.params,
                                     IntegrationConfig{spec.w, spec.weights}, spec.depth);
    else
      lists[i] = retrieve(queries[i].terms, index, spec.model, spec.params, spec.depth);
  });
  RunResult run;
  run.tag = spec.tag;
  for (std::size_t i = 0; i < queries.size(); ++i) run.queries[queries[i].qid] = std::move(lists[i]);
  return run;
}

inline double percent_delta(double value, double baseline) {
  if (baseline == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (value - baseline) / baseline * 100.0;
}

inline std::string format_percent(double pct) {
  if (!std::isfinite(pct)) return "n/a";
  std::string s = detail::format_fixed(pct, 1);
  if (s == "-0.0") s = "0.0";
  return (s[0] != '-' ? "+" : "") + s + "%";
}

// Per-query TSV with an aggregate footer. With a baseline report, the
// footer carries Wilcoxon p-values and significance markers.
inline std::string format_eval_report(const EvalReport& r, const EvalReport* baseline = nullptr) {
  std::string out = "qid\tAP\tP10\trelevant\tretrieved\n";
  for (const auto& q : r.queries)
    out += q.qid + "\t" + detail::format_fixed(q.ap, 4) + "\t" + detail::format_fixed(q.p10, 4) +
           "\t" + std::to_string(q.relevant) + "\t" + std::to_string(q.retrieved) + "\n";
  out += "all\tMAP\t" + detail::format_fixed(r.map, 4) + "\n";
  out += "all\tP10\t" + detail::format_fixed(r.mean_p10, 4) + "\n";
  out += "all\tqueries\t" + std::to_string(r.queries.size()) + "\n";
  out += "all\tno_relevant\t" + std::to_string(r.no_relevant.size()) + "\n";
  if (baseline) {
    if (baseline->queries.size() != r.queries.size())
      throw DataError("baseline and run cover different query sets");
    const auto w_ap = wilcoxon_signed_rank(baseline->ap_values(), r.ap_values());
    const auto w_p10 = wilcoxon_signed_rank(baseline->p10_values(), r.p10_values());
    out += "all\tMAP_delta\t" + format_percent(percent_delta(r.map, baseline->map)) +
           std::string(significance_marker(w_ap)) + "\n";
    out += "all\tMAP_p_two_sided\t" + detail::format_fixed(w_ap.p_two_sided, 6) + "\n";
    out += "all\tMAP_p_one_sided\t" + detail::format_fixed(w_ap.p_one_sided, 6) + "\n";
    out += "all\tP10_delta\t" + format_percent(percent_delta(r.mean_p10, baseline->mean_p10)) +
           std::string(significance_marker(w_p10)) + "\n";
    out += "all\tP10_p_two_sided\t" + detail::format_fixed(w_p10.p_two_sided, 6) + "\n";
    out += "all\tP10_p_one_sided\t" + detail::format_fixed(w_p10.p_one_sided, 6) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter sweeps.

struct SweepConfig {
  ModelKind model = ModelKind::kBm25;
  ModelParams params;
  std::vector<WeightKind> kinds{kAllWeightKinds.begin(), kAllWeightKinds.end()};
  std::vector<double> w_grid = default_w_grid();
  std::vector<double> mu_grid;  // Dirichlet only; empty means params.mu
  std::size_t depth = kDefaultDepth;
  unsigned threads = 1;
  const std::set<std::string>* qids = nullptr;  // evaluate only these

  void validate() const {
    if (w_grid.empty()) throw ConfigError("sweep grid is empty");
    for (const double w : w_grid)
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("sweep grid values must be finite and >= 0");
    if (kinds.empty()) throw ConfigError("no weight kinds to sweep");
    if (!mu_grid.empty() && model != ModelKind::kDirichlet)
      throw ConfigError("a mu grid only applies to the dirichlet model");
    for (const double mu : mu_grid)
      if (!(mu > 0.0)) throw ConfigError("mu grid values must be > 0");
    params.validate(model);
  }
};

struct SweepPoint {
  WeightKind kind{};
  double mu = 0.0;
  double w = 0.0;
  double map = 0.0;
  double p10 = 0.0;
  WilcoxonResult ap_test;
  WilcoxonResult p10_test;
};

struct SweepBaseline {
  double mu = 0.0;
  EvalReport report;
};

struct SweepResult {
  ModelKind model{};
  std::vector<SweepBaseline> baselines;  // one per mu
  std::vector<SweepPoint> points;        // ordered by mu, kind, w

  const SweepBaseline& baseline_for(double mu) const {
    for (const auto& b : baselines)
      if (b.mu == mu) return b;
    throw ConfigError("no baseline for mu");
  }

  // Points of one weight kind and mu in grid order.
  std::vector<const SweepPoint*> series(WeightKind kind, double mu) const {
    std::vector<const SweepPoint*> out;
    for (const auto& p : points)
      if (p.kind == kind && p.mu == mu) out.push_back(&p);
    return out;
  }
};

inline std::vector<double> sorted_grid(std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline SweepResult sweep(std::span<const Query> queries, const Qrels& qrels, const Collection& coll,
                         const SweepConfig& config) {
  config.validate();
  const auto w_grid = sorted_grid(config.w_grid);
  const auto mu_grid = config.mu_grid.empty() ? std::vector<double>{config.params.mu}
                                              : sorted_grid(config.mu_grid);
  std::vector<WeightTable> tables;
  for (const auto k : config.kinds) tables.push_back(build_table(coll.stats, k));

  SweepResult result;
  result.model = config.model;
  const auto params_for = [&](double mu) {
    ModelParams p = config.params;
    p.mu = mu;
    return p;
  };
  // Baselines first, one per mu.
  result.baselines.resize(mu_grid.size());
  parallel_for(mu_grid.size(), config.threads, [&](std::size_t i) {
    RunSpec spec{config.model, params_for(mu_grid[i]), nullptr, 0.0, config.depth, "baseline"};
    result.baselines[i] = SweepBaseline{
        mu_grid[i], evaluate(run_queries(queries, coll.index, spec), qrels, config.depth, config.qids)};
  });

  const std::size_t per_mu = tables.size() * w_grid.size();
  result.points.resize(mu_grid.size() * per_mu);
  parallel_for(result.points.size(), config.threads, [&](std::size_t i) {
    const std::size_t m = i / per_mu, k = (i % per_mu) / w_grid.size(), g = i % w_grid.size();
    RunSpec spec{config.model, params_for(mu_grid[m]), &tables[k], w_grid[g], config.depth, "sweep"};
    const auto report = evaluate(run_queries(queries, coll.index, spec), qrels, config.depth, config.qids);
    const auto& base = result.baselines[m].report;
    result.points[i] = SweepPoint{config.kinds[k],
                                  mu_grid[m],
                                  w_grid[g],
                                  report.map,
                                  report.mean_p10,
                                  wilcoxon_signed_rank(base.ap_values(), report.ap_values()),
                                  wilcoxon_signed_rank(base.p10_values(), report.p10_values())};
  });
  return result;
}

// Every grid point, machine-readable.
inline std::string format_sweep_tsv(const SweepResult& r) {
  std::string out =
      "model\tmu\tweight\tw\tMAP\tMAP_delta\tMAP_p\tMAP_sig\tP10\tP10_delta\tP10_p\tP10_sig\n";
  const bool show_mu = r.model == ModelKind::kDirichlet;
  for (const auto& b : r.baselines) {
    out += std::string(to_string(r.model)) + "\t" + (show_mu ? detail::format_double(b.mu) : "-") +
           "\tbaseline\t-\t" + detail::format_fixed(b.report.map, 4) + "\t+0.0%\t1.000000\t\t" +
           detail::format_fixed(b.report.mean_p10, 4) + "\t+0.0%\t1.000000\t\n";
  }
  for (const auto& p : r.points) {
    const auto& base = r.baseline_for(p.mu).report;
    out += std::string(to_string(r.model)) + "\t" + (show_mu ? detail::format_double(p.mu) : "-") +
           "\t" + std::string(to_string(p.kind)) + "\t" + detail::format_double(p.w) + "\t" +
           detail::format_fixed(p.map, 4) + "\t" + format_percent(percent_delta(p.map, base.map)) +
           "\t" + detail::format_fixed(p.ap_test.p_two_sided, 6) + "\t" +
           std::string(significance_marker(p.ap_test)) + "\t" + detail::format_fixed(p.p10, 4) +
           "\t" + format_percent(percent_delta(p.p10, base.mean_p10)) + "\t" +
           detail::format_fixed(p.p10_test.p_two_sided, 6) + "\t" +
           std::string(significance_marker(p.p10_test)) + "\n";
  }
  return out;
}

// Best point per metric; ties go to the smallest w.
inline const SweepPoint* best_point(std::span<const SweepPoint* const> series, bool by_map) {
  const SweepPoint* best = nullptr;
  for (const auto* p : series) {
    const double v = by_map ? p->map : p->p10;
    if (!best || v > (by_map ? best->map : best->p10)) best = p;
  }
  return best;
}

// Baseline row plus one row per weight: best MAP with its w, best P@10 with
// its w, percent deltas and significance markers.
inline std::string format_sweep_table(const SweepResult& r) {
  std::string out;
  for (const auto& b : r.baselines) {
    const std::string model(to_string(r.model));
    if (r.model == ModelKind::kDirichlet) out += "mu = " + detail::format_double(b.mu) + "\n";
    out += "run\tMAP\tw\tP@10\tw\n";
    out += model + "\t" + detail::format_fixed(b.report.map, 4) + "\t-\t" +
           detail::format_fixed(b.report.mean_p10, 4) + "\t-\n";
    std::vector<WeightKind> kinds;
    for (const auto& p : r.points)
      if (p.mu == b.mu && std::find(kinds.begin(), kinds.end(), p.kind) == kinds.end())
        kinds.push_back(p.kind);
    for (const auto k : kinds) {
      const auto s = r.series(k, b.mu);
      const auto* bm = best_point(s, true);
      const auto* bp = best_point(s, false);
      out += model + "_" + std::string(to_string(k)) + "\t" + detail::format_fixed(bm->map, 4) +
             std::string(significance_marker(bm->ap_test)) + " (" +
             format_percent(percent_delta(bm->map, b.report.map)) + ")\t" +
             detail::format_double(bm->w) + "\t" + detail::format_fixed(bp->p10, 4) +
             std::string(significance_marker(bp->p10_test)) + " (" +
             format_percent(percent_delta(bp->p10, b.report.mean_p10)) + ")\t" +
             detail::format_double(bp->w) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Train/test split: w tuned on train, applied to test.

struct TrainTestRow {
  WeightKind kind{};
  double w_trained_map = 0.0, w_best_map = 0.0;
  double map_trained = 0.0, map_best = 0.0;
  double w_trained_p10 = 0.0, w_best_p10 = 0.0;
  double p10_trained = 0.0, p10_best = 0.0;
  WilcoxonResult map_trained_test, map_best_test, p10_trained_test, p10_best_test;
};

struct TrainTestResult {
  ModelKind model{};
  double baseline_map = 0.0;
  double baseline_p10 = 0.0;
  std::vector<TrainTestRow> rows;
};

inline TrainTestResult traintest(std::span<const Query> queries, const Qrels& qrels,
                                 const Collection& coll, SweepConfig config,
                                 const std::set<std::string>& train,
                                 const std::set<std::string>& test) {
  if (train.empty() || test.empty()) throw ConfigError("train and test query sets must be non-empty");
  if (config.mu_grid.size() > 1) throw ConfigError("traintest uses a single mu");
  if (!config.mu_grid.empty()) config.params.mu = config.mu_grid.front();
  config.mu_grid.clear();
  // Overlap is only allowed when the split is intentionally degenerate.
  if (train != test)
    for (const auto& q : train)
      if (test.contains(q)) throw ConfigError("train and test query sets overlap on '" + q + "'");

  SweepConfig train_cfg = config, test_cfg = config;
  train_cfg.qids = &train;
  test_cfg.qids = &test;
  const auto on_train = sweep(queries, qrels, coll, train_cfg);
  const auto on_test = sweep(queries, qrels, coll, test_cfg);

  TrainTestResult out;
  out.model = config.model;
  out.baseline_map = on_test.baselines.front().report.map;
  out.baseline_p10 = on_test.baselines.front().report.mean_p10;
  const double mu = config.params.mu;
  for (const auto k : config.kinds) {
    const auto train_series = on_train.series(k, mu);
    const auto test_series = on_test.series(k, mu);
    const auto at = [&](double w) {
      for (const auto* p : test_series)
        if (p->w == w) return p;
      throw ConfigError("grid mismatch");
    };
    TrainTestRow row;
    row.kind = k;
    const auto* tm = at(best_point(train_series, true)->w);
    const auto* bm = best_point(test_series, true);
    const auto* tp = at(best_point(train_series, false)->w);
    const auto* bp = best_point(test_series, false);
    row.w_trained_map = tm->w;
    row.map_trained = tm->map;
    row.map_trained_test = tm->ap_test;
    row.w_best_map = bm->w;
    row.map_best = bm->map;
    row.map_best_test = bm->ap_test;
    row.w_trained_p10 = tp->w;
    row.p10_trained = tp->p10;
    row.p10_trained_test = tp->p10_test;
    row.w_best_p10 = bp->w;
    row.p10_best = bp->p10;
    row.p10_best_test = bp->p10_test;
    out.rows.push_back(row);
  }
  return out;
}

inline std::string format_traintest(const TrainTestResult& r) {
  const std::string model(to_string(r.model));
  const auto cell = [](double v, double base, const WilcoxonResult& t) {
    return detail::format_fixed(v, 4) + std::string(significance_marker(t)) + " (" +
           format_percent(percent_delta(v, base)) + ")";
  };
  std::string out = "run\tMAP_t\tMAP_b\tw_t\tw_b\tP10_t\tP10_b\tw_t\tw_b\n";
  out += model + "\t" + detail::format_fixed(r.baseline_map, 4) + "\t-\t-\t-\t" +
         detail::format_fixed(r.baseline_p10, 4) + "\t-\t-\t-\n";
  for (const auto& row : r.rows)
    out += model + "_" + std::string(to_string(row.kind)) + "\t" +
           cell(row.map_trained, r.baseline_map, row.map_trained_test) + "\t" +
           cell(row.map_best, r.baseline_map, row.map_best_test) + "\t" +
           detail::format_double(row.w_trained_map) + "\t" + detail::format_double(row.w_best_map) +
           "\t" + cell(row.p10_trained, r.baseline_p10, row.p10_trained_test) + "\t" +
           cell(row.p10_best, r.baseline_p10, row.p10_best_test) + "\t" +
           detail::format_double(row.w_trained_p10) + "\t" + detail::format_double(row.w_best_p10) +
           "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Correlation of POS weights with document IDF.

// ln(N / df) for every indexed term.
inline std::unordered_map<std::string, double> document_idf(const InvertedIndex& index) {
  std::unordered_map<std::string, double> out;
  const double n = static_cast<double>(index.num_docs());
  for (const auto& [t, list] : index.all_postings())
    out.emplace(t, std::log(n / static_cast<double>(list.size())));
  return out;
}

struct CorrelationRow {
  WeightKind kind{};
  double rho = 0.0;
  std::size_t terms = 0;
};

inline std::vector<CorrelationRow> correlate(const Collection& coll) {
  const auto idf = document_idf(coll.index);
  std::vector<CorrelationRow> out;
  for (const auto k : kAllWeightKinds) {
    const auto table = build_table(coll.stats, k);
    std::size_t shared = 0;
    for (const auto& [t, _] : table.values()) shared += idf.contains(t);
    out.push_back(CorrelationRow{k, spearman_rho(table.values(), idf), shared});
  }
  return out;
}

inline std::string format_correlation(std::span<const CorrelationRow> rows) {
  std::string out = "weight\trho_vs_idf\tterms\n";
  for (const auto& r : rows)
    out += std::string(to_string(r.kind)) + "\t" + detail::format_fixed(r.rho, 4) + "\t" +
           std::to_string(r.terms) + "\n";
  return out;
}

}  // namespace posw
