#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iterboot/distances.hpp"
#include "iterboot/random.hpp"

namespace {

using namespace iterboot;

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  Stream rng(seed, 0, 0);
  std::normal_distribution<double> z;
  std::vector<double> out(n);
  for (auto& x : out) x = z(rng);
  return out;
}

void BM_Kolmogorov(benchmark::State& state) {
  const auto x = normals(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(distances::kolmogorov_to_std_normal(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kolmogorov)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oNLogN);

void BM_Wasserstein2(benchmark::State& state) {
  const auto a = normals(static_cast<std::size_t>(state.range(0)), 2);
  const auto b = normals(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(distances::wasserstein2(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wasserstein2)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oNLogN);

void BM_PhiloxStream(benchmark::State& state) {
  Stream rng(4, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxStream);

}  // namespace
