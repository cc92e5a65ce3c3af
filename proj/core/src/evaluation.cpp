#include "vkge/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vkge/error.hpp"
#include "vkge/scoring.hpp"

namespace vkge {

double RankingMetrics::hits_at(int m) const {
  switch (m) {
    case 1:
      return hits_at_1;
    case 3:
      return hits_at_3;
    case 10:
      return hits_at_10;
    default:
      throw UsageError("hits@" + std::to_string(m) + " is not tracked (use 1, 3 or 10)");
  }
}

std::vector<double> score_candidates(const VariationalModel& model, const Query& query) {
  const auto ne = static_cast<EntityId>(model.num_entities());
  const auto scorer = model.spec().scorer;
  const auto rel = model.mean(Symbol::relation(query.relation));
  const auto anchor = model.mean(Symbol::entity(query.anchor));
  std::vector<double> scores(ne);
  for (EntityId e = 0; e < ne; ++e) {
    const auto cand = model.mean(Symbol::entity(e));
    scores[e] = query.side == QuerySide::kObject ? score(scorer, anchor, rel, cand) : score(scorer, cand, rel, anchor);
  }
  return scores;
}

std::size_t rank_from_scores(std::span<const double> scores, std::span<const EntityId> candidates, EntityId target) {
  if (target >= scores.size()) throw UsageError("rank target outside the score vector");
  const double t = scores[target];
  std::size_t greater = 0, ties = 0;
  bool found = false;
  for (auto c : candidates) {
    if (c >= scores.size()) throw UsageError("candidate outside the score vector");
    if (c == target) {
      found = true;
      continue;
    }
    if (scores[c] > t) {
      ++greater;
    } else if (scores[c] == t) {
      ++ties;
    }
  }
  if (!found) throw UsageError("rank target " + std::to_string(target) + " is not among the candidates");
  return 1 + greater + ties / 2;
}

std::size_t rank_query(const VariationalModel& model, const Query& query, EntityId target,
                       std::span<const EntityId> candidates) {
  return rank_from_scores(score_candidates(model, query), candidates, target);
}

namespace {

struct Accumulator {
  double rank_sum = 0.0;
  double reciprocal_sum = 0.0;
  std::size_t h1 = 0, h3 = 0, h10 = 0, n = 0;

  void add(std::size_t rank) {
    rank_sum += static_cast<double>(rank);
    reciprocal_sum += 1.0 / static_cast<double>(rank);
    h1 += rank <= 1;
    h3 += rank <= 3;
    h10 += rank <= 10;
    ++n;
  }

  RankingMetrics finish() const {
    RankingMetrics m;
    m.queries = n;
    if (n == 0) return m;
    const double dn = static_cast<double>(n);
    m.mean_rank = rank_sum / dn;
    m.mean_reciprocal_rank = reciprocal_sum / dn;
    m.hits_at_1 = static_cast<double>(h1) / dn;
    m.hits_at_3 = static_cast<double>(h3) / dn;
    m.hits_at_10 = static_cast<double>(h10) / dn;
    return m;
  }
};

}  // namespace

RankingReport evaluate_triples(const VariationalModel& model, const DatasetSplit& split,
                               std::span<const Triple> triples, bool keep_ranks) {
  if (model.num_entities() != split.num_entities() || model.num_relations() != split.num_relations()) {
    throw UsageError("model and dataset vocabulary sizes differ");
  }
  std::vector<EntityId> all(split.num_entities());
  std::iota(all.begin(), all.end(), EntityId{0});

  Accumulator raw, filtered;
  RankingReport report;
  for (const auto& t : triples) {
    for (const auto side : {QuerySide::kSubject, QuerySide::kObject}) {
      const Query q = side == QuerySide::kObject ? Query::object_of(t) : Query::subject_of(t);
      const EntityId target = side == QuerySide::kObject ? t.object : t.subject;
      const auto scores = score_candidates(model, q);
      const auto raw_rank = rank_from_scores(scores, all, target);
      const auto filtered_rank = rank_from_scores(scores, filtered_candidates(split, q, target), target);
      raw.add(raw_rank);
      filtered.add(filtered_rank);
      if (keep_ranks) report.ranks.push_back({t, side, raw_rank, filtered_rank});
    }
  }
  report.raw = raw.finish();
  report.filtered = filtered.finish();
  return report;
}

RankingReport evaluate(const VariationalModel& model, const DatasetSplit& split, EvalSplit which, bool keep_ranks) {
  const auto& part = which == EvalSplit::kValid ? split.valid() : split.test();
  if (part.empty()) throw UsageError(std::string("cannot evaluate an empty ") + (which == EvalSplit::kValid ? "valid" : "test") + " split");
  return evaluate_triples(model, split, part.triples(), keep_ranks);
}

}  // namespace vkge
