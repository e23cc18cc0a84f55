#include <benchmark/benchmark.h>

#include <numbers>

#include "mmslab/generators.hpp"
#include "mmslab/transport.hpp"

namespace {

using namespace mmslab;

// Uniform measures on the two halves of the segment.
void BM_SolveW2Segment(benchmark::State& state) {
  const auto s = segment_space(std::numbers::pi / static_cast<double>(state.range(0)));
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t i = 0; i < s.size(); ++i) (2 * i < s.size() ? left : right).push_back(i);
  const auto mu0 = normalized_restriction(s, left);
  const auto mu1 = normalized_restriction(s, right);
  for (auto _ : state) benchmark::DoNotOptimize(solve_w2(s, mu0, mu1).cost);
  state.SetComplexityN(static_cast<long>(s.size()));
}
BENCHMARK(BM_SolveW2Segment)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void BM_BruteForceW2(benchmark::State& state) {
  const auto s = segment_space(std::numbers::pi / 40);
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  Measure mu0;
  Measure mu1;
  for (std::size_t i = 0; i < k; ++i) {
    mu0.points.push_back(i);
    mu0.mass.push_back(1.0 / static_cast<double>(k));
    mu1.points.push_back(s.size() - 1 - 2 * i);
    mu1.mass.push_back(1.0 / static_cast<double>(k));
  }
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_w2(s, mu0, mu1));
}
BENCHMARK(BM_BruteForceW2)->DenseRange(2, 5);

}  // namespace
