#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vkge/kg.hpp"
#include "vkge/variational.hpp"

namespace vkge {

struct RankingMetrics {
  double mean_rank = 0.0;
  double mean_reciprocal_rank = 0.0;
  double hits_at_1 = 0.0;
  double hits_at_3 = 0.0;
  double hits_at_10 = 0.0;
  std::size_t queries = 0;

  // m must be 1, 3 or 10.
  double hits_at(int m) const;

  friend bool operator==(const RankingMetrics&, const RankingMetrics&) = default;
};

struct QueryRank {
  Triple triple;
  QuerySide side = QuerySide::kObject;
  std::size_t raw_rank = 0;
  std::size_t filtered_rank = 0;
};

struct RankingReport {
  RankingMetrics raw;
  RankingMetrics filtered;
  // Filled only when requested.
  std::vector<QueryRank> ranks;

  double mr_raw() const { return raw.mean_rank; }
  double mr_filtered() const { return filtered.mean_rank; }
  double mrr_filtered() const { return filtered.mean_reciprocal_rank; }
  double hits_at(int m) const { return filtered.hits_at(m); }
};

enum class EvalSplit { kValid, kTest };

// Scores of every entity completing the query, using posterior means.
std::vector<double> score_candidates(const VariationalModel& model, const Query& query);

// 1 + #{candidates scoring strictly higher} + floor(#{other candidates tied
// with the target} / 2). Throws UsageError when target is not a candidate.
std::size_t rank_from_scores(std::span<const double> scores, std::span<const EntityId> candidates, EntityId target);

std::size_t rank_query(const VariationalModel& model, const Query& query, EntityId target,
                       std::span<const EntityId> candidates);

// Ranks both (?, r, o) and (s, r, ?) for every triple of the chosen split;
// raw over all entities, filtered against train ∪ valid ∪ test.
RankingReport evaluate(const VariationalModel& model, const DatasetSplit& split, EvalSplit which,
                       bool keep_ranks = false);

RankingReport evaluate_triples(const VariationalModel& model, const DatasetSplit& split,
                               std::span<const Triple> triples, bool keep_ranks = false);

}  // namespace vkge
