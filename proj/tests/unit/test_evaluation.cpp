#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "vkge/error.hpp"
#include "vkge/evaluation.hpp"

namespace vkge {
namespace {

using testing::Engine;

std::vector<EntityId> all_entities(std::size_t n) {
  std::vector<EntityId> v(n);
  std::iota(v.begin(), v.end(), EntityId{0});
  return v;
}

TEST(RankFromScores, DirectCount) {
  const std::vector<double> scores{2.0, 3.0, 1.0};
  EXPECT_EQ(rank_from_scores(scores, all_entities(3), 0), 2u);
}

TEST(RankFromScores, MidTie) {
  const std::vector<double> scores(5, 0.25);
  EXPECT_EQ(rank_from_scores(scores, all_entities(5), 4), 3u);
  const std::vector<double> two{1.0, 1.0};
  EXPECT_EQ(rank_from_scores(two, all_entities(2), 0), 1u);
}

TEST(RankFromScores, TargetMustBeCandidate) {
  const std::vector<double> scores{2.0, 3.0, 1.0};
  const std::vector<EntityId> cands{1, 2};
  EXPECT_THROW(rank_from_scores(scores, cands, 0), UsageError);
  EXPECT_THROW(rank_from_scores(scores, cands, 9), UsageError);
}

TEST(RankFromScores, MatchesSortOracle) {
  Engine gen(1);
  std::uniform_int_distribution<int> coarse(-2, 2);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> scores(8);
    for (auto& s : scores) s = rep % 2 ? coarse(gen) : std::normal_distribution<double>()(gen);
    std::vector<EntityId> cands;
    for (EntityId e = 0; e < 8; ++e)
      if (std::bernoulli_distribution(0.7)(gen)) cands.push_back(e);
    if (cands.empty()) cands.push_back(0);
    const EntityId target = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(gen)];
    ASSERT_EQ(rank_from_scores(scores, cands, target), testing::sort_rank_oracle(scores, cands, target));
  }
}

TEST(RankFromScores, MonotoneTransformInvariance) {
  Engine gen(2);
  for (int rep = 0; rep < 200; ++rep) {
    auto scores = testing::gaussian_vector(gen, 12, 2.0);
    if (rep % 3 == 0) scores[3] = scores[5] = scores[7];
    std::vector<double> warped(scores.size());
    std::transform(scores.begin(), scores.end(), warped.begin(), [](double x) { return x * x * x + 2.0 * x - 1.0; });
    const auto cands = all_entities(12);
    for (EntityId t = 0; t < 12; ++t) ASSERT_EQ(rank_from_scores(scores, cands, t), rank_from_scores(warped, cands, t));
  }
}

TEST(Evaluate, PerfectModel) {
  // Rank 1 DistMult: e0 = 1, e1 = −1, e2 = 0, r = −1 puts the target first on
  // both sides of (0, 0, 1).
  const DatasetSplit split(testing::numbered_vocabulary(3, 1), {}, {}, {{0, 0, 1}});
  VariationalModel model({Scorer::kDistMult, Grouping::kLIM, 1}, 3, 1);
  model.mean(Symbol::entity(0))[0] = 1.0;
  model.mean(Symbol::entity(1))[0] = -1.0;
  model.mean(Symbol::entity(2))[0] = 0.0;
  model.mean(Symbol::relation(0))[0] = -1.0;
  const auto r = evaluate(model, split, EvalSplit::kTest);
  for (const auto* m : {&r.raw, &r.filtered}) {
    EXPECT_EQ(m->mean_rank, 1.0);
    EXPECT_EQ(m->mean_reciprocal_rank, 1.0);
    EXPECT_EQ(m->hits_at_1, 1.0);
    EXPECT_EQ(m->hits_at_10, 1.0);
    EXPECT_EQ(m->queries, 2u);
  }
}

TEST(Evaluate, RandomModelMeanRankIsUniform) {
  Engine gen(3);
  const std::size_t ne = 60;
  const auto split = testing::random_split(gen, ne, 4, 0, 0, 500);
  const auto model = testing::random_model(gen, {Scorer::kComplEx, Grouping::kLIM, 8}, ne, 4, 1.0, -6.0, -6.0);
  const auto r = evaluate(model, split, EvalSplit::kTest);
  ASSERT_EQ(r.raw.queries, 1000u);
  const double n = static_cast<double>(ne);
  const double se = std::sqrt((n * n - 1.0) / 12.0 / 1000.0);
  EXPECT_NEAR(r.mr_raw(), (n + 1.0) / 2.0, 3.0 * se);
}

TEST(Evaluate, MatchesRankingOracle) {
  Engine gen(4);
  for (int rep = 0; rep < 30; ++rep) {
    const auto split = testing::random_split(gen, 8, 2, 20, 5, 6);
    auto model = testing::random_model(gen, {rep % 2 ? Scorer::kComplEx : Scorer::kDistMult, Grouping::kLFM, 2}, 8,
                                       2, 1.0, -6.0, -6.0);
    if (rep % 3 == 0) {
      for (auto& x : model.tables()[0].means()) x = std::round(x);
    }
    const std::set<Triple> known(split.all_true().triples().begin(), split.all_true().triples().end());
    const auto oracle = testing::ranking_oracle(model, split.test().triples(), known);
    const auto got = evaluate(model, split, EvalSplit::kTest, true);
    ASSERT_EQ(got.ranks.size(), oracle.raw_ranks.size());
    for (std::size_t i = 0; i < got.ranks.size(); ++i) {
      EXPECT_EQ(got.ranks[i].raw_rank, oracle.raw_ranks[i]);
      EXPECT_EQ(got.ranks[i].filtered_rank, oracle.filtered_ranks[i]);
    }
    EXPECT_EQ(got.raw, oracle.raw);
    EXPECT_EQ(got.filtered, oracle.filtered);
  }
}

TEST(Evaluate, ReportInvariants) {
  Engine gen(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto split = testing::random_split(gen, 15, 3, 80, 20, 20);
    const auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLIM, 3}, 15, 3, 1.0, -6.0, -6.0);
    const auto r = evaluate(model, split, EvalSplit::kValid, true);
    EXPECT_LE(r.mr_filtered(), r.mr_raw());
    for (const auto& q : r.ranks) EXPECT_LE(q.filtered_rank, q.raw_rank);
    for (const auto* m : {&r.raw, &r.filtered}) {
      EXPECT_LE(m->hits_at_1, m->hits_at_3);
      EXPECT_LE(m->hits_at_3, m->hits_at_10);
      EXPECT_GE(m->hits_at_1, 0.0);
      EXPECT_LE(m->hits_at_10, 1.0);
      EXPECT_GT(m->mean_reciprocal_rank, 0.0);
      EXPECT_LE(m->mean_reciprocal_rank, 1.0);
    }
  }
}

TEST(Evaluate, DistMultSymmetrizedGraphSidesAgree) {
  Engine gen(6);
  std::set<Triple> pool;
  for (const auto& t : testing::random_triples(gen, 12, 2, 40)) {
    if (t.subject == t.object) continue;
    pool.insert(t);
    pool.insert({t.object, t.relation, t.subject});
  }
  std::vector<Triple> train, test;
  std::set<Triple> placed;
  std::size_t i = 0;
  for (const auto& t : pool) {
    if (placed.count(t)) continue;
    const Triple rev{t.object, t.relation, t.subject};
    auto& dst = (i++ % 4 == 0) ? test : train;
    dst.push_back(t);
    dst.push_back(rev);
    placed.insert(t);
    placed.insert(rev);
  }
  const DatasetSplit split(testing::numbered_vocabulary(12, 2), train, {}, test);
  const auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLIM, 4}, 12, 2, 1.0, -6.0, -6.0);
  const auto r = evaluate(model, split, EvalSplit::kTest, true);
  std::vector<std::pair<std::size_t, std::size_t>> subj, obj;
  for (const auto& q : r.ranks) (q.side == QuerySide::kSubject ? subj : obj).emplace_back(q.raw_rank, q.filtered_rank);
  std::sort(subj.begin(), subj.end());
  std::sort(obj.begin(), obj.end());
  EXPECT_EQ(subj, obj);
}

TEST(Evaluate, VocabularySizeMismatch) {
  Engine gen(7);
  const auto split = testing::random_split(gen, 6, 2, 10, 2, 2);
  const VariationalModel model({Scorer::kDistMult, Grouping::kLIM, 2}, 7, 2);
  EXPECT_THROW(evaluate(model, split, EvalSplit::kTest), UsageError);
}

TEST(RankingMetrics, HitsAt) {
  RankingMetrics m;
  m.hits_at_1 = 0.1;
  m.hits_at_3 = 0.3;
  m.hits_at_10 = 0.5;
  EXPECT_EQ(m.hits_at(3), 0.3);
  EXPECT_THROW(m.hits_at(5), UsageError);
}

}  // namespace
}  // namespace vkge
