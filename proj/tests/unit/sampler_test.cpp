// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "intentd/rng.hpp"
#include "intentd/sampler.hpp"
#include "support/error_code.hpp"
#include "support/synthetic.hpp"

namespace intentd {
namespace {

using testing::code_of;

LabeledExample ex(const std::string& text, const std::string& intent) {
  return {text, IntentLabel::normalize(intent)};
}

std::vector<Utterance> batch_of(std::initializer_list<const char*> texts) {
  std::vector<Utterance> out;
  for (const char* t : texts) out.push_back({std::to_string(out.size()), t, std::nullopt});
  return out;
}

TEST(FewShots, IdenticalTextComesFirst) {
  TrigramEmbedder e;
  const auto pool = FewShotPool::build({ex("what is the weather in rome", "weather"),
                                        ex("transfer money to my savings account", "transfer"),
                                        ex("play some jazz music", "play_music")},
                                       e);
  EXPECT_EQ(pool.size(), 3u);
  EXPECT_EQ(pool.embeddings().size(), 3u);
  const auto batch = batch_of({"please do something unrelated", "play some jazz music"});
  const auto shots = select_few_shots(batch, pool, 1, e);
  ASSERT_EQ(shots.size(), 1u);
  EXPECT_EQ(shots[0].text, "play some jazz music");
}

TEST(FewShots, ZeroShotsAndClamping) {
  TrigramEmbedder e;
  const auto pool = FewShotPool::build({ex("a b c", "x"), ex("d e f", "y"), ex("a b c", "x")}, e);
  const auto batch = batch_of({"a b c d"});
  EXPECT_TRUE(select_few_shots(batch, pool, 0, e).empty());
  EXPECT_EQ(select_few_shots(batch, pool, 10, e).size(), 2u);         // distinct texts only
  EXPECT_EQ(select_few_shots(batch, pool, 10, e, false).size(), 3u);  // whole pool
  EXPECT_EQ(code_of([&] { select_few_shots(batch, FewShotPool{}, 1, e); }), ErrorCode::kEmptyPool);
}

TEST(FewShots, OrderedByMaxSimilarity) {
  // Orthogonal unit axes make the similarities exact: 0.9, 0.5, 0.1.
  class AxisEmbedder final : public EmbeddingProvider {
   public:
    std::string name() const override { return "axis"; }
    std::size_t dim() const override { return 2; }
    bool normalizes() const override { return true; }

   protected:
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override {
      std::vector<EmbeddingVector> out;
      for (const auto& t : texts) {
        const double s = t == "q" ? 1.0 : std::stod(t);
        out.emplace_back(std::vector<double>{s, std::sqrt(1.0 - s * s)}, true);
      }
      return out;
    }
  } e;
  const auto pool = FewShotPool::build({ex("0.1", "c"), ex("0.9", "a"), ex("0.5", "b")}, e);
  const auto shots = select_few_shots(batch_of({"q"}), pool, 2, e);
  ASSERT_EQ(shots.size(), 2u);
  EXPECT_EQ(shots[0].text, "0.9");
  EXPECT_EQ(shots[1].text, "0.5");
}

TEST(FewShots, PropertiesOnSyntheticCorpus) {
  const DatasetSplit data = testing::make_corpus({12, 10, 0, 4, 21});
  const KirSplit split = build_kir_split(data, 0.75, 0.3, 4);
  TrigramEmbedder e;
  const auto pool = FewShotPool::build(split.few_shot_pool_source, e);
  std::set<std::string> pool_texts;
  for (const auto& p : split.few_shot_pool_source) pool_texts.insert(p.text);
  const auto tests = to_utterances(split.test);
  for (std::size_t lo = 0; lo < tests.size(); lo += 16) {
    const std::span<const Utterance> batch(tests.data() + lo, std::min<std::size_t>(16, tests.size() - lo));
    for (std::size_t n : {1u, 5u, 10u, 500u}) {
      const auto shots = select_few_shots(batch, pool, n, e);
      EXPECT_EQ(shots.size(), std::min(n, pool_texts.size()));
      std::set<std::string> seen;
      for (const auto& s : shots) {
        EXPECT_TRUE(pool_texts.contains(s.text));
        EXPECT_TRUE(seen.insert(s.text).second);
        for (const auto& u : batch) EXPECT_NE(s.text, u.text);
      }
      const auto again = select_few_shots(batch, pool, n, e);
      ASSERT_EQ(again.size(), shots.size());
      for (std::size_t i = 0; i < shots.size(); ++i) EXPECT_EQ(again[i].text, shots[i].text);
    }
  }
}

TEST(RandomFewShots, SeededSubsetOfPool) {
  TrigramEmbedder e;
  std::vector<LabeledExample> xs;
  for (int i = 0; i < 30; ++i) xs.push_back(ex("example " + std::to_string(i), "intent_" + std::to_string(i % 3)));
  const auto pool = FewShotPool::build(xs, e);
  Rng a(5), b(5);
  const auto s1 = select_random_few_shots(pool, 7, a);
  const auto s2 = select_random_few_shots(pool, 7, b);
  ASSERT_EQ(s1.size(), 7u);
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i].text, s2[i].text);
  Rng c(5);
  EXPECT_EQ(select_random_few_shots(pool, 100, c).size(), 30u);
  EXPECT_TRUE(select_random_few_shots(pool, 0, c).empty());
}

TEST(Skif, PassThroughWhenDisabledOrLarge) {
  TrigramEmbedder e;
  const std::vector<IntentLabel> db = {IntentLabel::normalize("transfer_money"), IntentLabel::normalize("weather"),
                                       IntentLabel::normalize("alarm")};
  const auto batch = batch_of({"send 50 dollars to mom"});
  EXPECT_EQ(select_intents_skif(batch, db, std::nullopt, e), db);
  EXPECT_EQ(select_intents_skif(batch, db, 3, e), db);
  EXPECT_EQ(select_intents_skif(batch, db, 30, e), db);
  EXPECT_EQ(code_of([&] { select_intents_skif(batch, db, 0, e); }), ErrorCode::kInvalidArgument);
}

TEST(Skif, PicksMostSimilarLabelUnderTrigramEmbedder) {
  TrigramEmbedder e;
  const std::vector<IntentLabel> db = {IntentLabel::normalize("transfer_money"), IntentLabel::normalize("weather")};
  const auto batch = batch_of({"send 50 dollars to mom"});
  const auto q = hashed_trigram_embed("send 50 dollars to mom", 512);
  const double s_transfer = cosine_similarity(q, hashed_trigram_embed("transfer money", 512));
  const double s_weather = cosine_similarity(q, hashed_trigram_embed("weather", 512));
  const auto expected = s_transfer >= s_weather ? db[0] : db[1];
  const auto got = select_intents_skif(batch, db, 1, e);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], expected);
  EXPECT_EQ(got[0].value(), "transfer_money");
}

TEST(Skif, KeepsDatabaseOrderAndSubset) {
  const DatasetSplit data = testing::make_corpus({25, 6, 0, 2, 8});
  TrigramEmbedder e;
  const auto tests = to_utterances(data.test);
  for (std::size_t n = 1; n <= 25; n += 4) {
    const std::span<const Utterance> batch(tests.data(), 8);
    const auto got = select_intents_skif(batch, data.intent_inventory, n, e);
    ASSERT_EQ(got.size(), std::min<std::size_t>(n, 25));
    std::size_t pos = 0;
    for (const auto& l : got) {
      auto it = std::find(data.intent_inventory.begin() + static_cast<std::ptrdiff_t>(pos),
                          data.intent_inventory.end(), l);
      ASSERT_NE(it, data.intent_inventory.end());
      pos = static_cast<std::size_t>(it - data.intent_inventory.begin()) + 1;
    }
  }
}

TEST(Skif, CentroidRepresentationUsesPoolExamples) {
  TrigramEmbedder e;
  // Label texts are meaningless; only the pool examples tie them to the batch.
  const std::vector<IntentLabel> db = {IntentLabel::normalize("zq"), IntentLabel::normalize("xv")};
  const auto pool = FewShotPool::build({ex("book a table for two tonight", "zq"), ex("how hot is it outside", "xv")}, e);
  const auto batch = batch_of({"book a table for four tomorrow"});
  const auto got = select_intents_skif(batch, db, 1, e, SkifRepresentation::kPoolCentroid, &pool);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].value(), "zq");
}

}  // namespace
}  // namespace intentd
