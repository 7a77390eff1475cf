#include <benchmark/benchmark.h>

#include "pentree/data.hpp"
#include "pentree/grow.hpp"
#include "pentree/oracle.hpp"
#include "pentree/prune.hpp"
#include "pentree/select.hpp"

namespace {

using namespace pentree;

Dataset design1(std::size_t n, std::size_t p) { return generate(DesignSpec{1, n, p, 0.3, 17}); }

void BM_GrowMaximal(benchmark::State& state) {
  const Dataset d = design1(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(grow_maximal(d));
  state.SetComplexityN(state.range(0) * state.range(1));
}
BENCHMARK(BM_GrowMaximal)->Args({50, 30})->Args({200, 30})->Args({200, 1000})->Args({1000, 100});

void BM_WeakestLink(benchmark::State& state) {
  const Dataset d = design1(static_cast<std::size_t>(state.range(0)), 30);
  const TreeClassifier t = grow_maximal(d);
  state.counters["leaves"] = static_cast<double>(t.size());
  for (auto _ : state) benchmark::DoNotOptimize(weakest_link(t, d));
}
BENCHMARK(BM_WeakestLink)->Arg(50)->Arg(200)->Arg(1000);

void BM_CrossValidation(benchmark::State& state) {
  const Dataset d = design1(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(cv_select_alpha(d, CVConfig{10, CVRule::Min, 1}));
}
BENCHMARK(BM_CrossValidation)->Args({50, 30})->Args({200, 30})->Args({200, 1000})->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSelect(benchmark::State& state) {
  const Dataset d = design1(8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_select(d, LinearPenalty{0.05}, 3));
}
BENCHMARK(BM_ExhaustiveSelect)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
