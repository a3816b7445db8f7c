// posw: build POS n-gram statistics and an inverted index, run retrieval with
// POS-based term weights, and evaluate.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "posw/posw.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw posw::ConfigError(std::string("missing ") + what);
  if (!fs::exists(path)) throw posw::ConfigError(std::string(what) + " '" + path + "' does not exist");
}

// Accepts "0,0.5,1K,50K".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (auto item : posw::detail::split_char(text, ',')) {
    item = posw::detail::trim(item);
    if (item.empty()) continue;
    double scale = 1.0;
    if (item.back() == 'K' || item.back() == 'k') {
      scale = 1000.0;
      item.remove_suffix(1);
    }
    double v = 0.0;
    if (!posw::detail::parse_number(item, v))
      throw posw::ConfigError("bad grid value '" + std::string(item) + "'");
    out.push_back(v * scale);
  }
  if (out.empty()) throw posw::ConfigError("sweep grid is empty");
  return out;
}

// "301-450", "301,302,310", or "@file" with one qid per line.
std::set<std::string> parse_qid_set(const std::string& spec) {
  std::set<std::string> out;
  if (!spec.empty() && spec.front() == '@') {
    const std::string path = spec.substr(1);
    require_file(path, "qid list");
    for (const auto id : posw::detail::split_ws(posw::detail::read_file(path))) out.emplace(id);
    return out;
  }
  for (auto item : posw::detail::split_char(spec, ',')) {
    item = posw::detail::trim(item);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    unsigned lo = 0, hi = 0;
    if (dash != std::string_view::npos && posw::detail::parse_number(item.substr(0, dash), lo) &&
        posw::detail::parse_number(item.substr(dash + 1), hi)) {
      if (lo > hi) throw posw::ConfigError("bad qid range '" + std::string(item) + "'");
      for (unsigned q = lo; q <= hi; ++q) out.insert(std::to_string(q));
    } else {
      out.emplace(item);
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    posw::detail::write_file(path, text);
}

struct ModelFlags {
  std::string model = "bm25";
  posw::ModelParams params;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model, "Retrieval model: tfidf, bm25 or dirichlet")
        ->capture_default_str();
    cmd->add_option("--mu", params.mu, "Dirichlet prior mu")->capture_default_str();
    cmd->add_option("--k1", params.bm25.k1, "BM25 k1")->capture_default_str();
    cmd->add_option("--b", params.bm25.b, "BM25 b")->capture_default_str();
    cmd->add_option("--k3", params.bm25.k3, "BM25 k3")->capture_default_str();
    cmd->add_option("--slope", params.pivot_slope, "Pivoted normalization slope")
        ->capture_default_str();
  }

  posw::ModelKind kind() const {
    const auto k = posw::parse_model(model);
    params.validate(k);
    return k;
  }
};

std::vector<posw::WeightKind> parse_weight_list(const std::string& text) {
  if (text == "all") return {posw::kAllWeightKinds.begin(), posw::kAllWeightKinds.end()};
  std::vector<posw::WeightKind> out;
  for (auto item : posw::detail::split_char(text, ','))
    out.push_back(posw::parse_weight_kind(posw::detail::trim(item)));
  return out;
}

std::vector<posw::Query> load_topics(const std::string& path, const posw::Collection& coll) {
  require_file(path, "topics file");
  return posw::parse_topics(posw::detail::read_file(path), coll.options.norm);
}

posw::Qrels load_qrels(const std::string& path) {
  require_file(path, "qrels file");
  return posw::parse_qrels(posw::detail::read_file(path));
}

posw::Collection load_index_dir(const std::string& dir) {
  if (dir.empty()) throw posw::ConfigError("missing --index");
  if (!fs::is_directory(dir)) throw posw::ConfigError("index directory '" + dir + "' does not exist");
  return posw::load_collection(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"POS n-gram term weighting for ad hoc retrieval"};
  app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads")->capture_default_str();

  // index
  auto* cmd_index = app.add_subcommand("index", "Build the inverted index and POS n-gram statistics");
  std::vector<std::string> tagged_paths, corpus_paths;
  std::string collapse_path, lexicon_path, index_out;
  std::size_t n = 4;
  bool stem = false, stopwords = false, strict_tags = false;
  cmd_index->add_option("--tagged", tagged_paths, "Pre-tagged corpus file(s)");
  cmd_index->add_option("--corpus", corpus_paths, "TREC SGML corpus file(s), tagged with the fallback tagger");
  cmd_index->add_option("--n", n, "POS n-gram length")->capture_default_str();
  cmd_index->add_option("--collapse-map", collapse_path, "fine_tag<TAB>coarse_tag map");
  cmd_index->add_option("--lexicon", lexicon_path, "surface<TAB>tag lexicon for the fallback tagger");
  cmd_index->add_flag("--stem", stem, "Apply the S-stemmer to every term");
  cmd_index->add_flag("--stopwords", stopwords, "Drop stopwords from the index (POS statistics keep them)");
  cmd_index->add_flag("--strict-tags", strict_tags, "Fail on tags missing from the collapse map");
  cmd_index->add_option("--out", index_out, "Output directory")->required();

  // search
  auto* cmd_search = app.add_subcommand("search", "Run topics against an index");
  std::string index_dir, topics_path, qrels_path, out_path, weight_name = "none", run_tag = "posw";
  double w = 0.0;
  std::size_t depth = posw::kDefaultDepth;
  ModelFlags search_model;
  cmd_search->add_option("--index", index_dir, "Index directory")->required();
  cmd_search->add_option("--topics", topics_path, "Topics file (qid<TAB>title)")->required();
  search_model.add(cmd_search);
  cmd_search->add_option("--weight", weight_name, "POS weight or 'none' for the baseline")->capture_default_str();
  cmd_search->add_option("--w", w, "Integration parameter w")->capture_default_str();
  cmd_search->add_option("--depth", depth, "Documents per query")->capture_default_str();
  cmd_search->add_option("--run-tag", run_tag, "Run tag column")->capture_default_str();
  cmd_search->add_option("--out", out_path, "Run file (default stdout)");

  // evaluate
  auto* cmd_eval = app.add_subcommand("evaluate", "MAP and P@10 of a run, optionally against a baseline run");
  std::string run_path, baseline_path;
  cmd_eval->add_option("--run", run_path, "Run file")->required();
  cmd_eval->add_option("--qrels", qrels_path, "Qrels file")->required();
  cmd_eval->add_option("--baseline", baseline_path, "Baseline run for significance testing");
  cmd_eval->add_option("--depth", depth, "Evaluation depth")->capture_default_str();
  cmd_eval->add_option("--out", out_path, "Report file (default stdout)");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "Sweep w (and mu) for each POS weight");
  ModelFlags sweep_model;
  std::string weights_list = "all", w_grid_text, mu_grid_text, table_path;
  cmd_sweep->add_option("--index", index_dir, "Index directory")->required();
  cmd_sweep->add_option("--topics", topics_path, "Topics file")->required();
  cmd_sweep->add_option("--qrels", qrels_path, "Qrels file")->required();
  sweep_model.add(cmd_sweep);
  cmd_sweep->add_option("--weight", weights_list, "Comma-separated weights or 'all'")->capture_default_str();
  cmd_sweep->add_option("--w-grid", w_grid_text, "Comma-separated w values (K suffix allowed)");
  cmd_sweep->add_option("--mu-grid", mu_grid_text, "Comma-separated mu values (dirichlet)");
  cmd_sweep->add_option("--depth", depth, "Documents per query")->capture_default_str();
  cmd_sweep->add_option("--out", out_path, "Full grid TSV (default stdout)");
  cmd_sweep->add_option("--table", table_path, "Summary table file (default stdout)");

  // traintest
  auto* cmd_tt = app.add_subcommand("traintest", "Tune w on training topics, report on test topics");
  ModelFlags tt_model;
  std::string train_spec, test_spec;
  cmd_tt->add_option("--index", index_dir, "Index directory")->required();
  cmd_tt->add_option("--topics", topics_path, "Topics file")->required();
  cmd_tt->add_option("--qrels", qrels_path, "Qrels file")->required();
  tt_model.add(cmd_tt);
  cmd_tt->add_option("--weight", weights_list, "Comma-separated weights or 'all'")->capture_default_str();
  cmd_tt->add_option("--w-grid", w_grid_text, "Comma-separated w values");
  cmd_tt->add_option("--train", train_spec, "Training qids: 301-450, a,b,c or @file")->required();
  cmd_tt->add_option("--test", test_spec, "Test qids")->required();
  cmd_tt->add_option("--depth", depth, "Documents per query")->capture_default_str();
  cmd_tt->add_option("--out", out_path, "Report file (default stdout)");

  // correlate
  auto* cmd_corr = app.add_subcommand("correlate", "Spearman rho of each POS weight against IDF");
  cmd_corr->add_option("--index", index_dir, "Index directory")->required();
  cmd_corr->add_option("--out", out_path, "Report file (default stdout)");

  // weights-export
  auto* cmd_export = app.add_subcommand("weights-export", "Write one POS weight table as TSV");
  cmd_export->add_option("--index", index_dir, "Index directory")->required();
  cmd_export->add_option("--weight", weight_name, "Weight kind")->required();
  cmd_export->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (threads == 0) threads = posw::default_threads();

  try {
    if (*cmd_index) {
      if (tagged_paths.empty() && corpus_paths.empty())
        throw posw::ConfigError("index needs --tagged or --corpus");
      posw::check_ngram_length(n);
      posw::CollapseMap map = posw::CollapseMap::default_penn();
      if (!collapse_path.empty()) {
        require_file(collapse_path, "collapse map");
        map = posw::CollapseMap::load(collapse_path);
      }
      std::vector<posw::TaggedDocument> docs;
      std::size_t unknown = 0;
      for (const auto& path : tagged_paths) {
        require_file(path, "tagged corpus");
        try {
          auto corpus = posw::parse_tagged(posw::detail::read_file(path), map,
                                           strict_tags ? posw::UnknownTagPolicy::kError
                                                       : posw::UnknownTagPolicy::kMapToOther);
          unknown += corpus.unknown_tags;
          for (auto& d : corpus.docs) docs.push_back(std::move(d));
        } catch (const posw::DataError& e) {
          throw posw::DataError(path + ": " + e.what());
        }
      }
      if (!corpus_paths.empty()) {
        posw::Lexicon lexicon;
        if (!lexicon_path.empty()) {
          require_file(lexicon_path, "lexicon");
          lexicon = posw::Lexicon::load(lexicon_path, map);
        }
        for (const auto& path : corpus_paths) {
          require_file(path, "corpus");
          try {
            const auto raw = posw::parse_trec_sgml(posw::detail::read_file(path));
            for (auto& d : posw::tag_documents(raw, lexicon, map.tags())) docs.push_back(std::move(d));
          } catch (const posw::DataError& e) {
            throw posw::DataError(path + ": " + e.what());
          }
        }
      }
      posw::IndexOptions opts;
      opts.norm.stem = stem;
      opts.remove_stopwords = stopwords;
      auto built = posw::build_artifacts(docs, n, map.tags(), opts, threads);
      posw::Collection coll{std::move(built.index), std::move(built.stats), opts};
      posw::save_collection(coll, index_out);
      std::cout << posw::collection_summary(coll);
      if (unknown > 0) std::cerr << "note: " << unknown << " token(s) with unmapped tags counted as OTHER\n";
    } else if (*cmd_search) {
      const auto model = search_model.kind();
      const auto coll = load_index_dir(index_dir);
      const auto queries = load_topics(topics_path, coll);
      std::optional<posw::WeightTable> table;
      if (weight_name != "none") table = posw::build_table(coll.stats, posw::parse_weight_kind(weight_name));
      posw::IntegrationConfig{w, nullptr}.validate();
      posw::RunSpec spec{model, search_model.params, table ? &*table : nullptr, w, depth, run_tag};
      write_output(out_path, posw::write_run(posw::run_queries(queries, coll.index, spec, threads)));
    } else if (*cmd_eval) {
      require_file(run_path, "run file");
      const auto qrels = load_qrels(qrels_path);
      const auto run = posw::parse_run(posw::detail::read_file(run_path));
      const auto report = posw::evaluate(run, qrels, depth);
      std::optional<posw::EvalReport> base;
      if (!baseline_path.empty()) {
        require_file(baseline_path, "baseline run");
        base = posw::evaluate(posw::parse_run(posw::detail::read_file(baseline_path)), qrels, depth);
      }
      write_output(out_path, posw::format_eval_report(report, base ? &*base : nullptr));
    } else if (*cmd_sweep || *cmd_tt) {
      const bool is_sweep = cmd_sweep->parsed();
      const ModelFlags& mf = is_sweep ? sweep_model : tt_model;
      posw::SweepConfig cfg;
      cfg.model = mf.kind();
      cfg.params = mf.params;
      cfg.kinds = parse_weight_list(weights_list);
      if (!w_grid_text.empty()) cfg.w_grid = parse_grid(w_grid_text);
      if (!mu_grid_text.empty()) cfg.mu_grid = parse_grid(mu_grid_text);
      cfg.depth = depth;
      cfg.threads = threads;
      cfg.validate();
      const auto coll = load_index_dir(index_dir);
      const auto queries = load_topics(topics_path, coll);
      const auto qrels = load_qrels(qrels_path);
      if (is_sweep) {
        const auto result = posw::sweep(queries, qrels, coll, cfg);
        const std::string table = posw::format_sweep_table(result);
        write_output(out_path, posw::format_sweep_tsv(result));
        if (!table_path.empty())
          posw::detail::write_file(table_path, table);
        else if (!out_path.empty() && out_path != "-")
          std::cout << table;
      } else {
        const auto result = posw::traintest(queries, qrels, coll, cfg, parse_qid_set(train_spec),
                                            parse_qid_set(test_spec));
        write_output(out_path, posw::format_traintest(result));
      }
    } else if (*cmd_corr) {
      const auto coll = load_index_dir(index_dir);
      write_output(out_path, posw::format_correlation(posw::correlate(coll)));
    } else if (*cmd_export) {
      const auto coll = load_index_dir(index_dir);
      write_output(out_path, posw::build_table(coll.stats, posw::parse_weight_kind(weight_name)).to_tsv());
    }
  } catch (const posw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const posw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
