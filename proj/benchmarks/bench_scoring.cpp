#include <benchmark/benchmark.h>

#include <vector>

#include "vkge/rng.hpp"
#include "vkge/scoring.hpp"

namespace {

std::vector<double> noise(std::size_t n, vkge::Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

void BM_Score(benchmark::State& state, vkge::Scorer scorer) {
  const auto width = static_cast<std::size_t>(state.range(0));
  vkge::Rng rng(1);
  const auto s = noise(width, rng), r = noise(width, rng), o = noise(width, rng);
  for (auto _ : state) benchmark::DoNotOptimize(vkge::score(scorer, s, r, o));
  state.SetItemsProcessed(state.iterations());
}

void BM_ScoreGrad(benchmark::State& state, vkge::Scorer scorer) {
  const auto width = static_cast<std::size_t>(state.range(0));
  vkge::Rng rng(2);
  const auto s = noise(width, rng), r = noise(width, rng), o = noise(width, rng);
  for (auto _ : state) {
    auto g = vkge::grad_score(scorer, s, r, o);
    benchmark::DoNotOptimize(g);
  }
}

BENCHMARK_CAPTURE(BM_Score, distmult, vkge::Scorer::kDistMult)->Arg(20)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_Score, complex, vkge::Scorer::kComplEx)->Arg(20)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_ScoreGrad, distmult, vkge::Scorer::kDistMult)->Arg(100);
BENCHMARK_CAPTURE(BM_ScoreGrad, complex, vkge::Scorer::kComplEx)->Arg(100);

}  // namespace
