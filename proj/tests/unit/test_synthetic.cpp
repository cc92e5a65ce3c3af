#include <gtest/gtest.h>

#include <map>

#include "vkge/error.hpp"
#include "vkge/synthetic.hpp"

namespace vkge {
namespace {

TEST(SyntheticKg, DefaultShape) {
  const auto kg = make_synthetic_kg({});
  EXPECT_EQ(kg.num_entities(), 14u);
  EXPECT_EQ(kg.num_relations(), 55u);
  EXPECT_EQ(kg.size(), 55u * 5u * 2u);
  EXPECT_EQ(kg.vocabulary().entities.name(3), "e3");
  EXPECT_EQ(kg.vocabulary().relations.name(54), "r54");
}

TEST(SyntheticKg, SymmetricMatchings) {
  SyntheticKgConfig c;
  c.num_entities = 20;
  c.num_relations = 7;
  c.pairs_per_relation = 10;
  c.seed = 4;
  const auto kg = make_synthetic_kg(c);
  std::map<std::pair<EntityId, RelationId>, int> out_degree;
  for (const auto& t : kg.triples()) {
    EXPECT_NE(t.subject, t.object);
    EXPECT_TRUE(kg.contains({t.object, t.relation, t.subject}));
    ++out_degree[{t.subject, t.relation}];
  }
  for (const auto& [_, n] : out_degree) EXPECT_EQ(n, 1);
  EXPECT_EQ(kg.size(), 7u * 10u * 2u);
}

TEST(SyntheticKg, Deterministic) {
  SyntheticKgConfig c;
  c.seed = 11;
  const auto a = make_synthetic_kg(c);
  const auto b = make_synthetic_kg(c);
  EXPECT_TRUE(std::equal(a.triples().begin(), a.triples().end(), b.triples().begin(), b.triples().end()));
  c.seed = 12;
  const auto d = make_synthetic_kg(c);
  EXPECT_FALSE(std::equal(a.triples().begin(), a.triples().end(), d.triples().begin(), d.triples().end()));
}

TEST(SyntheticKg, PopularityFavoursHighIds) {
  SyntheticKgConfig c;
  c.num_entities = 30;
  c.num_relations = 200;
  c.pairs_per_relation = 5;
  c.popularity_skew = 10.0;
  const auto kg = make_synthetic_kg(c);
  std::vector<int> degree(30, 0);
  for (const auto& t : kg.triples()) ++degree[t.subject];
  int low = 0, high = 0;
  for (int e = 0; e < 10; ++e) low += degree[e];
  for (int e = 20; e < 30; ++e) high += degree[e];
  EXPECT_GT(high, low);
}

TEST(SyntheticKg, ConfigErrors) {
  SyntheticKgConfig c;
  c.num_entities = 1;
  EXPECT_THROW(make_synthetic_kg(c), ConfigError);
  c = {};
  c.pairs_per_relation = 8;
  EXPECT_THROW(make_synthetic_kg(c), ConfigError);
  c = {};
  c.pairs_per_relation = 0;
  EXPECT_THROW(make_synthetic_kg(c), ConfigError);
  c = {};
  c.popularity_skew = 0.5;
  EXPECT_THROW(make_synthetic_kg(c), ConfigError);
  c = {};
  c.latent_rank = 0;
  EXPECT_THROW(make_synthetic_kg(c), ConfigError);
}

}  // namespace
}  // namespace vkge
