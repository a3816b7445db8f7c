#include <cmath>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "oracle/oracle.hpp"
#include "posw/weights.hpp"
#include "support/synthetic.hpp"

namespace posw {
namespace {

const TagSet kTags;

PosNgramStats toy_stats() { return accumulate(synth::toy_collection(), 2, kTags); }

oracle::Weight to_oracle(WeightKind k) {
  switch (k) {
    case WeightKind::kPosMlBoolean: return oracle::Weight::MlBoolean;
    case WeightKind::kPosMlWeighted: return oracle::Weight::MlWeighted;
    case WeightKind::kPosIdf: return oracle::Weight::Idf;
    case WeightKind::kPosRidf: return oracle::Weight::Ridf;
    case WeightKind::kPosBs: return oracle::Weight::Bs;
  }
  return oracle::Weight::Idf;
}

TEST(MlWeight, ToyCollection) {
  const auto s = toy_stats();
  EXPECT_NEAR(*ml_weight("fast", s, MlMode::kBoolean), 0.2, 1e-12);
  EXPECT_NEAR(*ml_weight("cat", s, MlMode::kBoolean), 0.4, 1e-12);
  EXPECT_NEAR(*ml_weight("cat", s, MlMode::kWeighted), 0.4, 1e-12);
  EXPECT_FALSE(ml_weight("zzz", s, MlMode::kBoolean).has_value());
}

TEST(MlWeight, ModesAgreeWhenPfIsOne) {
  std::mt19937_64 rng(1);
  const auto s = accumulate(synth::random_tagged(rng, 30, 20, 40, 6), 3, kTags);
  int checked = 0;
  for (const auto& [t, m] : s.term_map()) {
    if (m.size() != 1) continue;
    EXPECT_DOUBLE_EQ(*ml_weight(t, s, MlMode::kBoolean), *ml_weight(t, s, MlMode::kWeighted));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(PosIdf, ToyCollection) {
  const auto s = toy_stats();
  EXPECT_NEAR(*pos_idf("fast", s), std::log(3.0), 1e-12);
  EXPECT_NEAR(*pos_idf("fast", s), 1.0986, 1e-4);
  EXPECT_NEAR(*pos_idf("cat", s), std::log(1.5), 1e-12);
  EXPECT_NEAR(*pos_idf("cat", s), 0.4055, 1e-4);
  EXPECT_FALSE(pos_idf("zzz", s).has_value());
}

TEST(PosIdf, ZeroWhenTermIsInEveryType) {
  const TaggedDocument d{"D", {{"x", kTags.get("DET")}, {"x", kTags.get("NOUN")}, {"x", kTags.get("VERB")}}};
  PosNgramStats s(2);
  s.add_document(d);
  EXPECT_EQ(*pos_idf("x", s), 0.0);
}

TEST(PosRidf, ToyCollection) {
  const auto s = toy_stats();
  EXPECT_NEAR(*pos_ridf("fast", s), std::log(3.0) + std::log(1.0 - std::exp(-1.0 / 3.0)), 1e-9);
  EXPECT_NEAR(*pos_ridf("fast", s), -0.1621, 1e-4);
  EXPECT_NEAR(*expected_idf("fast", s), 1.2607, 1e-4);
  // TF(cat) = 2: ln 1.5 + ln(1 - e^(-2/3)) = 0.4055 - 0.7204.
  EXPECT_NEAR(*pos_ridf("cat", s), std::log(1.5) + std::log(1.0 - std::exp(-2.0 / 3.0)), 1e-12);
  EXPECT_NEAR(*pos_ridf("cat", s), -0.3149, 1e-4);
}

TEST(PosRidf, ApproachesPosIdfForFrequentTerms) {
  // Alternating tags keep |C| at 3 while TF(x) grows large.
  TaggedDocument d{"D", {}};
  for (int i = 0; i < 400; ++i) d.tokens.push_back({"x", kTags.get(i % 2 ? "NOUN" : "VERB")});
  d.tokens.push_back({"y", kTags.get("ADJ")});
  PosNgramStats s(2);
  s.add_document(d);
  EXPECT_LT(*expected_idf("x", s), 1e-12);
  EXPECT_NEAR(*pos_ridf("x", s), *pos_idf("x", s), 1e-12);
}

TEST(PosBs, Fixtures) {
  const auto s = toy_stats();
  EXPECT_EQ(*pos_bs("fast", s), 0.0);
  // Twelve copies of one term under one tag: 11 windows of one n-gram type.
  TaggedDocument d{"D", {}};
  for (int i = 0; i < 12; ++i) d.tokens.push_back({"x", kTags.get("NOUN")});
  PosNgramStats t(2);
  t.add_document(d);
  ASSERT_EQ(t.tf("x"), 11u);
  ASSERT_EQ(t.pf("x"), 1u);
  EXPECT_NEAR(*pos_bs("x", t), std::log(11.0), 1e-12);
  EXPECT_NEAR(*pos_bs("x", t), 2.3979, 1e-4);
}

TEST(BuildTable, ToyVocabularyAndDefaults) {
  const auto table = build_table(toy_stats(), WeightKind::kPosIdf);
  std::set<std::string> terms;
  for (const auto& [t, _] : table.values()) terms.insert(t);
  EXPECT_EQ(terms, (std::set<std::string>{"the", "cat", "sat", "a", "dog", "ran", "fast"}));
  EXPECT_EQ(table("zzz"), 0.0);
  EXPECT_EQ(table.distinct_types(), 3u);

  const auto empty = build_table(PosNgramStats(4), WeightKind::kPosMlWeighted);
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty("anything"), 0.0);
}

TEST(BuildTable, OracleEquivalenceOnRandomCorpora) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto docs = synth::random_tagged(rng, 50, 30, 60, 14);
    const auto stats = accumulate(docs, n, kTags);
    const auto odocs = synth::to_oracle(docs);
    for (const auto kind : kAllWeightKinds) {
      const auto table = build_table(stats, kind);
      const auto expected = oracle::brute_weights(odocs, n, to_oracle(kind));
      ASSERT_EQ(table.size(), expected.size());
      for (const auto& [t, v] : expected) {
        ASSERT_TRUE(table.contains(t)) << t;
        EXPECT_NEAR(table(t), v, 1e-9) << to_string(kind) << " " << t;
      }
    }
  }
}

TEST(Properties, RangesAndIdentities) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = accumulate(synth::random_tagged(rng, 40, 30, 50, 10), 2 + trial % 3, kTags);
    const double log_c = std::log(static_cast<double>(s.distinct_types()));
    for (const auto& [t, m] : s.term_map()) {
      const double lo = [&] {
        double v = 1;
        for (const auto& [g, c] : m) v = std::min(v, double(s.count(g)) / double(s.total_windows()));
        return v;
      }();
      const double hi = [&] {
        double v = 0;
        for (const auto& [g, c] : m) v = std::max(v, double(s.count(g)) / double(s.total_windows()));
        return v;
      }();
      for (const auto mode : {MlMode::kBoolean, MlMode::kWeighted}) {
        const double v = *ml_weight(t, s, mode);
        EXPECT_GE(v, lo - 1e-15);
        EXPECT_LE(v, hi + 1e-15);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      const double idf = *pos_idf(t, s);
      EXPECT_GE(idf, 0.0);
      EXPECT_LE(idf, log_c + 1e-15);
      EXPECT_GE(*pos_bs(t, s), 0.0);
      EXPECT_NEAR(*pos_ridf(t, s) + *expected_idf(t, s), idf, 1e-12 * std::max(1.0, std::abs(idf)));
      for (const auto k : kAllWeightKinds) EXPECT_TRUE(std::isfinite(*compute_weight(k, t, s)));
    }
  }
}

TEST(Properties, PosIdfStrictlyDecreasingInPf) {
  std::mt19937_64 rng(12);
  const auto s = accumulate(synth::random_tagged(rng, 50, 30, 80, 14, 40), 3, kTags);
  for (const auto& [a, ma] : s.term_map())
    for (const auto& [b, mb] : s.term_map())
      if (ma.size() < mb.size()) {
        EXPECT_GT(*pos_idf(a, s), *pos_idf(b, s));
      }
}

TEST(Properties, DuplicatingTheCorpusKeepsRatioWeights) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto docs = synth::random_tagged(rng, 20, 25, 30, 8);
    const auto base = accumulate(docs, 3, kTags);
    for (const int k : {2, 3}) {
      std::vector<TaggedDocument> copies;
      for (int c = 0; c < k; ++c)
        for (auto d : docs) {
          d.docno += "#" + std::to_string(c);
          copies.push_back(d);
        }
      const auto scaled = accumulate(copies, 3, kTags);
      for (const auto kind : {WeightKind::kPosMlBoolean, WeightKind::kPosMlWeighted, WeightKind::kPosIdf}) {
        const auto a = build_table(base, kind), b = build_table(scaled, kind);
        for (const auto& [t, v] : a.values()) EXPECT_NEAR(b(t), v, 1e-12);
      }
    }
  }
}

TEST(WeightTsv, ExportImport) {
  std::mt19937_64 rng(5);
  const auto s = accumulate(synth::random_tagged(rng, 20, 20, 30, 8), 2, kTags);
  for (const auto kind : kAllWeightKinds) {
    const auto table = build_table(s, kind);
    const auto text = table.to_tsv();
    EXPECT_TRUE(text.starts_with("# kind=" + std::string(to_string(kind)) + " n=2 distinct_types="));
    const auto back = WeightTable::from_tsv(text);
    EXPECT_EQ(back.kind(), kind);
    EXPECT_EQ(back.n(), 2u);
    EXPECT_EQ(back.distinct_types(), s.distinct_types());
    EXPECT_EQ(back.values(), table.values());
  }
  EXPECT_THROW(WeightTable::from_tsv("cat\tpos_idf\t1\n"), FormatError);
  EXPECT_THROW(WeightTable::from_tsv("# kind=pos_idf\ncat\tpos_bs\t1\n"), ParseError);
  EXPECT_THROW(parse_weight_kind("pos_jes"), ConfigError);
}

}  // namespace
}  // namespace posw
