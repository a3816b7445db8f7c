#pragma once

// Corpus generators shared by the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "oracle/oracle.hpp"
#include "posw/corpus.hpp"
#include "posw/tagger.hpp"

namespace synth {

// D1 "the cat sat" [DET NOUN VERB]; D2 "a dog ran fast" [DET NOUN VERB ADV].
inline std::vector<posw::TaggedDocument> toy_collection(const posw::TagSet& tags = posw::TagSet()) {
  const auto t = [&](const char* s, const char* tag) { return posw::TaggedToken{s, tags.get(tag)}; };
  return {
      {"D1", {t("the", "DET"), t("cat", "NOUN"), t("sat", "VERB")}},
      {"D2", {t("a", "DET"), t("dog", "NOUN"), t("ran", "VERB"), t("fast", "ADV")}},
  };
}

inline std::string toy_tagged_text() {
  return "#DOC D1\nthe\tDT\ncat\tNN\nsat\tVBD\n#DOC D2\na\tDT\ndog\tNN\nran\tVBD\nfast\tRB\n";
}

inline std::vector<oracle::Doc> to_oracle(const std::vector<posw::TaggedDocument>& docs) {
  std::vector<oracle::Doc> out;
  for (const auto& d : docs) {
    oracle::Doc o{d.docno, {}, {}};
    for (const auto& t : d.tokens) {
      o.terms.push_back(t.surface);
      o.tags.push_back(t.tag.id);
    }
    out.push_back(std::move(o));
  }
  return out;
}

// Lowercase alphabetic surfaces "w0".."w{vocab-1}" with uniformly random tags
// drawn from the first `num_tags` coarse categories.
inline std::vector<posw::TaggedDocument> random_tagged(std::mt19937_64& rng, std::size_t max_docs,
                                                       std::size_t max_tokens, std::size_t vocab,
                                                       std::size_t num_tags, std::size_t min_docs = 1) {
  std::uniform_int_distribution<std::size_t> ndocs(min_docs, max_docs);
  std::uniform_int_distribution<std::size_t> ntok(0, max_tokens);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> tag(0, num_tags - 1);
  std::vector<posw::TaggedDocument> docs;
  const std::size_t count = ndocs(rng);
  for (std::size_t d = 0; d < count; ++d) {
    posw::TaggedDocument doc{"doc" + std::to_string(d), {}};
    const std::size_t len = ntok(rng);
    for (std::size_t i = 0; i < len; ++i)
      doc.tokens.push_back(posw::TaggedToken{"w" + std::to_string(word(rng)),
                                             posw::CoarseTag{static_cast<std::uint8_t>(tag(rng))}});
    docs.push_back(std::move(doc));
  }
  return docs;
}

// A retrieval test bed where relevance is planted on open-class key terms.
// Per topic q the query is "key<q> noise<q>":
//   strong  relevant, key term 2-3 times in regular noun slots
//   echo    relevant, noise term repeated in a short document
//   chatter non-relevant, noise term repeated in a short document
//   passing non-relevant, key term once in a long document
// The key term always sits in frequent sentence patterns and the noise term
// in random tag contexts, so every POS weight ranks key above noise.
struct PlantedExperiment {
  std::vector<posw::TaggedDocument> docs;
  std::vector<posw::Query> queries;
  std::vector<posw::QrelEntry> qrels;
};

struct PlantedShape {
  std::size_t topics = 25;
  std::size_t strong = 6, echo = 2, chatter = 5, passing = 4;
  std::size_t total_docs = 500;
};

inline PlantedExperiment planted_experiment(std::uint64_t seed, const PlantedShape& shape = {}) {
  const posw::TagSet tags;
  std::mt19937_64 rng(seed);
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const auto T = [&](const char* name) { return tags.get(name); };

  static const std::vector<std::vector<const char*>> kTemplates = {
      {"DET", "ADJ", "NOUN", "VERB", "PREP", "DET", "NOUN"},
      {"PRON", "VERB", "DET", "NOUN", "CONJ", "DET", "NOUN"},
      {"DET", "NOUN", "MODAL", "VERB", "DET", "ADJ", "NOUN"},
  };
  const auto word_for = [&](const std::string& tag) -> std::string {
    if (tag == "DET") return pick(2) ? "the" : "a";
    if (tag == "PREP") return pick(2) ? "of" : "in";
    if (tag == "CONJ") return "and";
    if (tag == "PRON") return pick(2) ? "he" : "it";
    if (tag == "MODAL") return pick(2) ? "will" : "can";
    if (tag == "VERB") return "v" + std::to_string(pick(80));
    if (tag == "ADJ") return "j" + std::to_string(pick(80));
    return "n" + std::to_string(pick(400));
  };

  using Tokens = std::vector<posw::TaggedToken>;
  // A template sentence; `plant` replaces up to `plant_count` NOUN slots.
  const auto sentence = [&](Tokens& out, const std::string& plant, std::size_t& plant_count) {
    const auto& tpl = kTemplates[pick(kTemplates.size())];
    for (const char* tag : tpl) {
      std::string w = word_for(tag);
      if (plant_count > 0 && std::string(tag) == "NOUN") {
        w = plant;
        --plant_count;
      }
      out.push_back({w, T(tag)});
    }
  };
  static const std::vector<const char*> kNoisyTags = {"NOUN", "VERB", "ADJ", "ADV",   "PRON",
                                                      "NUM",  "INTERJ", "PARTICLE", "OTHER", "PUNCT"};
  const auto noisy_fragment = [&](Tokens& out, const std::string& plant) {
    for (int i = 0; i < 5; ++i) {
      const char* tag = kNoisyTags[pick(kNoisyTags.size())];
      out.push_back({i == 2 ? plant : "z" + std::to_string(pick(300)), T(tag)});
    }
  };
  const auto filler = [&](Tokens& out, std::size_t sentences) {
    std::size_t none = 0;
    for (std::size_t s = 0; s < sentences; ++s) sentence(out, "", none);
  };

  PlantedExperiment ex;
  std::size_t next_doc = 0;
  const auto add_doc = [&](Tokens tokens) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "SYN-%04zu", next_doc++);
    ex.docs.push_back({buf, std::move(tokens)});
    return ex.docs.back().docno;
  };

  for (std::size_t q = 0; q < shape.topics; ++q) {
    const std::string qid = std::to_string(301 + q);
    const std::string key = "key" + std::to_string(q), noise = "noise" + std::to_string(q);
    ex.queries.push_back({qid, {key, noise}});
    for (std::size_t i = 0; i < shape.strong; ++i) {
      Tokens t;
      std::size_t plant = 2 + pick(2);
      while (plant > 0) sentence(t, key, plant);
      filler(t, 1);
      ex.qrels.push_back({qid, add_doc(std::move(t)), 1});
    }
    for (std::size_t i = 0; i < shape.echo; ++i) {
      Tokens t;
      filler(t, 1);
      for (int f = 0; f < 4; ++f) noisy_fragment(t, noise);
      ex.qrels.push_back({qid, add_doc(std::move(t)), 1});
    }
    for (std::size_t i = 0; i < shape.chatter; ++i) {
      Tokens t;
      filler(t, 1);
      const int frags = 3 + static_cast<int>(pick(2));
      for (int f = 0; f < frags; ++f) noisy_fragment(t, noise);
      ex.qrels.push_back({qid, add_doc(std::move(t)), 0});
    }
    for (std::size_t i = 0; i < shape.passing; ++i) {
      Tokens t;
      filler(t, 4);
      std::size_t plant = 1;
      sentence(t, key, plant);
      filler(t, 4);
      ex.qrels.push_back({qid, add_doc(std::move(t)), 0});
    }
  }
  while (ex.docs.size() < shape.total_docs) {
    Tokens t;
    filler(t, 2 + pick(3));
    add_doc(std::move(t));
  }
  return ex;
}

inline std::string topics_text(const std::vector<posw::Query>& queries) {
  std::string out;
  for (const auto& q : queries) {
    out += q.qid + "\t";
    for (std::size_t i = 0; i < q.terms.size(); ++i) out += (i ? " " : "") + q.terms[i];
    out += "\n";
  }
  return out;
}

inline std::string qrels_text(const std::vector<posw::QrelEntry>& qrels) {
  std::string out;
  for (const auto& e : qrels) out += e.qid + " 0 " + e.docno + " " + std::to_string(e.relevance) + "\n";
  return out;
}

inline posw::Qrels to_qrels(const std::vector<posw::QrelEntry>& entries) {
  posw::Qrels q;
  for (const auto& e : entries) q.add(e);
  return q;
}

}  // namespace synth
