#include <benchmark/benchmark.h>

#include <numbers>
#include <algorithm>
#include <random>

#include "mmslab/generators.hpp"
#include "mmslab/regularity.hpp"

namespace {

using namespace mmslab;

FiniteMMS random_sample(std::mt19937_64& rng, std::size_t n) {
  const auto [ball, radius] = euclidean_ball_sample(2, 1.0, 64);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = rng() % ball.size();
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return restrict_to(ball, idx);
}

void BM_GHExact(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto X = random_sample(rng, n);
  const auto Y = random_sample(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(gh_exact(X, Y).value);
}
BENCHMARK(BM_GHExact)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

void BM_RegularScanSegment(benchmark::State& state) {
  const auto s = segment_space(std::numbers::pi / 400);
  for (auto _ : state) {
    benchmark::DoNotOptimize(epsilon_regular_scan(s, s.size() / 2, 0.1, 0.5, {1}));
  }
}
BENCHMARK(BM_RegularScanSegment)->Unit(benchmark::kMillisecond);

}  // namespace
