#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "posw/tagger.hpp"

namespace posw {
namespace {

TEST(TagSet, DefaultHasFourteenCategories) {
  const TagSet tags;
  EXPECT_EQ(tags.size(), 14u);
  EXPECT_EQ(tags.name(tags.other()), "OTHER");
}

TEST(TagSet, RejectsDuplicates) {
  EXPECT_THROW(TagSet({"NOUN", "NOUN"}), ConfigError);
}

TEST(Collapse, DefaultMapExamples) {
  const auto map = CollapseMap::default_penn();
  const auto& tags = map.tags();
  EXPECT_EQ(collapse("NN", map), tags.get("NOUN"));
  EXPECT_EQ(collapse("VBD", map), tags.get("VERB"));
  EXPECT_EQ(collapse("XYZ", map), tags.other());
  EXPECT_EQ(collapse("", map), tags.other());
}

TEST(Collapse, CoarseLabelsMapToThemselves) {
  const auto map = CollapseMap::default_penn();
  for (const auto& name : map.tags().names()) EXPECT_EQ(map.tags().name(map.collapse(name)), name);
}

TEST(Collapse, EveryPennTagResolvesInsideTheSet) {
  const auto map = CollapseMap::default_penn();
  const std::vector<std::string> penn = {
      "CC", "CD",  "DT",  "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",  "MD", "NN",
      "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM",
      "TO", "UH",  "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
      ".",  ",",   ":",   "``",  "''",  "(",   ")",   "#",   "$"};
  std::set<std::string> used;
  for (const auto& t : penn) {
    ASSERT_TRUE(map.entries().contains(t)) << t;
    const auto c = map.collapse(t);
    ASSERT_LT(c.id, map.tags().size());
    used.insert(map.tags().name(c));
  }
  // Deterministic: repeated calls agree.
  for (const auto& t : penn) EXPECT_EQ(map.collapse(t), map.collapse(t));
  EXPECT_EQ(used.size(), 14u);
}

TEST(CollapseMapFile, ParsesCustomInventory) {
  const auto map = CollapseMap::parse("# comment\nNN\tN\nVB\tV\n\nJJ\tN\n");
  EXPECT_EQ(map.tags().names(), (std::vector<std::string>{"N", "V", "OTHER"}));
  EXPECT_EQ(map.tags().name(map.collapse("JJ")), "N");
  EXPECT_EQ(map.collapse("RB"), map.tags().other());
}

TEST(CollapseMapFile, RejectsMalformedLines) {
  EXPECT_THROW(CollapseMap::parse("NN NOUN\n"), ParseError);
  EXPECT_THROW(CollapseMap::parse("NN\tNOUN\nNN\tVERB\n"), ConfigError);
}

TEST(CollapseMapFile, ShippedFileMatchesBuiltInDefault) {
  const auto shipped = CollapseMap::load(std::string(POSW_DATA_DIR) + "/collapse_map.tsv");
  const auto builtin = CollapseMap::default_penn();
  EXPECT_EQ(shipped.tags(), builtin.tags());
  EXPECT_EQ(shipped.entries(), builtin.entries());
}

TEST(Fallback, SuffixAndDefaultRules) {
  const TagSet tags;
  const Lexicon empty;
  const auto tag1 = [&](const std::string& w) {
    const std::vector<std::string> tok{w};
    return tags.name(tag_fallback(tok, empty, tags).front());
  };
  EXPECT_EQ(tag1("quickly"), "ADV");
  EXPECT_EQ(tag1("zorblax"), "NOUN");
  EXPECT_EQ(tag1("running"), "VERB");
  EXPECT_EQ(tag1("jumped"), "VERB");
  EXPECT_EQ(tag1("famous"), "ADJ");
  EXPECT_EQ(tag1("careful"), "ADJ");
  EXPECT_EQ(tag1("active"), "ADJ");
}

TEST(Fallback, LexiconWins) {
  const auto map = CollapseMap::default_penn();
  const auto lex = Lexicon::parse("the\tDT\nrunning\tNN\nrunning\tNN\nrunning\tVBG\n", map);
  const std::vector<std::string> tokens{"the", "Running", "quickly"};
  const auto out = tag_fallback(tokens, lex, map.tags());
  ASSERT_EQ(out.size(), tokens.size());
  EXPECT_EQ(map.tags().name(out[0]), "DET");
  EXPECT_EQ(map.tags().name(out[1]), "NOUN");
  EXPECT_EQ(map.tags().name(out[2]), "ADV");
}

TEST(Fallback, OutputLengthMatchesInput) {
  const TagSet tags;
  const Lexicon lex;
  for (std::size_t n = 0; n < 20; ++n) {
    std::vector<std::string> tokens(n, "word");
    EXPECT_EQ(tag_fallback(tokens, lex, tags).size(), n);
  }
}

}  // namespace
}  // namespace posw
