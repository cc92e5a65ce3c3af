#pragma once

#include <cstddef>
#include <cstdint>

#include "vkge/kg.hpp"

namespace vkge {

// Symmetric knowledge graph drawn from a hidden low-rank trilinear model plus
// a per-entity popularity bias, for desk-scale experiments. Each relation is a
// partial matching: the highest-scoring disjoint entity pairs, every pair
// stored in both directions, so no (s, r) has more than one true object.
struct SyntheticKgConfig {
  std::size_t num_entities = 14;
  std::size_t num_relations = 55;
  std::size_t latent_rank = 3;
  // Disjoint entity pairs per relation; at most num_entities / 2.
  std::size_t pairs_per_relation = 5;
  // exp(bias) of the most popular entity over the least popular; 1 disables
  // the bias. Popularity rises geometrically with the entity id.
  double popularity_skew = 10.0;
  std::uint64_t seed = 1;
};

// Entities are named "e<id>", relations "r<id>".
KnowledgeGraph make_synthetic_kg(const SyntheticKgConfig& config);

}  // namespace vkge
