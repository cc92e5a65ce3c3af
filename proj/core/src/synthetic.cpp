#include "vkge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vkge/error.hpp"
#include "vkge/rng.hpp"

namespace vkge {

KnowledgeGraph make_synthetic_kg(const SyntheticKgConfig& config) {
  const std::size_t ne = config.num_entities, nr = config.num_relations, rank = config.latent_rank;
  if (ne < 2 || nr < 1 || rank < 1) throw ConfigError("synthetic KG needs >= 2 entities, >= 1 relation, rank >= 1");
  const std::size_t max_pairs = ne / 2;
  if (config.pairs_per_relation < 1 || config.pairs_per_relation > max_pairs) {
    throw ConfigError("pairs_per_relation must lie in [1, " + std::to_string(max_pairs) + "]");
  }
  if (!(config.popularity_skew >= 1.0)) throw ConfigError("popularity_skew must be >= 1");

  Rng rng(config.seed);
  std::vector<double> ent(ne * rank), rel(nr * rank);
  for (auto& x : ent) x = rng.normal();
  for (auto& x : rel) x = rng.normal();
  // Unit-norm entity factors so that popularity comes from the bias alone.
  for (std::size_t e = 0; e < ne; ++e) {
    double norm = 0.0;
    for (std::size_t i = 0; i < rank; ++i) norm += ent[e * rank + i] * ent[e * rank + i];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rank; ++i) ent[e * rank + i] /= norm;
  }
  // Popularity grows geometrically with the entity id.
  std::vector<double> bias(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    bias[e] = std::log(config.popularity_skew) * static_cast<double>(e) / static_cast<double>(ne - 1);
  }

  auto vocab = std::make_shared<Vocabulary>();
  for (std::size_t e = 0; e < ne; ++e) vocab->entities.intern("e" + std::to_string(e));
  for (std::size_t r = 0; r < nr; ++r) vocab->relations.intern("r" + std::to_string(r));

  std::vector<Triple> triples;
  struct Pair {
    double score;
    EntityId a, b;
  };
  std::vector<Pair> pairs;
  for (std::size_t r = 0; r < nr; ++r) {
    pairs.clear();
    for (EntityId a = 0; a < ne; ++a) {
      for (EntityId b = a + 1; b < ne; ++b) {
        double s = bias[a] + bias[b];
        for (std::size_t i = 0; i < rank; ++i) s += rel[r * rank + i] * ent[a * rank + i] * ent[b * rank + i];
        pairs.push_back({s, a, b});
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.score > y.score; });
    // Greedy matching: each entity takes at most one partner per relation.
    std::vector<bool> used(ne, false);
    std::size_t taken = 0;
    for (const auto& p : pairs) {
      if (taken == config.pairs_per_relation) break;
      if (used[p.a] || used[p.b]) continue;
      used[p.a] = used[p.b] = true;
      ++taken;
      const auto rid = static_cast<RelationId>(r);
      triples.push_back({p.a, rid, p.b});
      triples.push_back({p.b, rid, p.a});
    }
  }
  return KnowledgeGraph(std::move(vocab), std::move(triples));
}

}  // namespace vkge
