#include <benchmark/benchmark.h>

#include "mmslab/generators.hpp"
#include "mmslab/symmetry.hpp"

namespace {

using namespace mmslab;

void BM_EnumerateEarring(benchmark::State& state) {
  const auto h = hawaiian_truncation(static_cast<std::size_t>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_isometries(h).maps.size());
}
BENCHMARK(BM_EnumerateEarring)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_EnumerateDiskGrid(benchmark::State& state) {
  const auto g = euclidean_ball_grid(2, 1.0, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_isometries(g).maps.size());
}
BENCHMARK(BM_EnumerateDiskGrid)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
