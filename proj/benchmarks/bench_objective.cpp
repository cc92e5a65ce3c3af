#include <benchmark/benchmark.h>

#include "vkge/objective.hpp"
#include "vkge/synthetic.hpp"

namespace {

void BM_ElboMinibatch(benchmark::State& state) {
  const auto kg = vkge::make_synthetic_kg({});
  const auto split = vkge::split_dataset(kg, {0.8, 0.1, 0.1}, 1);
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto batch = static_cast<std::size_t>(state.range(1));
  vkge::Rng init(1);
  const auto model = vkge::VariationalModel::initialize({vkge::Scorer::kComplEx, vkge::Grouping::kLIM, k},
                                                        split.num_entities(), split.num_relations(), init);
  const auto triples = split.train().triples().subspan(0, std::min(batch, split.train().size()));
  vkge::Rng rng(2);
  for (auto _ : state) {
    auto r = vkge::elbo_minibatch(model, triples, split, rng);
    benchmark::DoNotOptimize(r.breakdown.elbo);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(triples.size()));
}

BENCHMARK(BM_ElboMinibatch)->Args({20, 32})->Args({20, 128})->Args({100, 128});

}  // namespace
