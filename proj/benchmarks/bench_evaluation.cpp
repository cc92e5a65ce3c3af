#include <benchmark/benchmark.h>

#include "vkge/evaluation.hpp"
#include "vkge/synthetic.hpp"

namespace {

void BM_Evaluate(benchmark::State& state) {
  vkge::SyntheticKgConfig cfg;
  cfg.num_entities = static_cast<std::size_t>(state.range(0));
  cfg.num_relations = 20;
  cfg.pairs_per_relation = cfg.num_entities / 2;
  const auto split = vkge::split_dataset(vkge::make_synthetic_kg(cfg), {0.8, 0.1, 0.1}, 1);
  vkge::Rng init(1);
  const auto model = vkge::VariationalModel::initialize({vkge::Scorer::kDistMult, vkge::Grouping::kLIM, 50},
                                                        split.num_entities(), split.num_relations(), init);
  for (auto _ : state) {
    auto r = vkge::evaluate(model, split, vkge::EvalSplit::kTest);
    benchmark::DoNotOptimize(r.filtered.mean_rank);
  }
  state.SetItemsProcessed(state.iterations() * 2 * static_cast<std::int64_t>(split.test().size()));
}

BENCHMARK(BM_Evaluate)->Arg(50)->Arg(200);

}  // namespace
