#include <benchmark/benchmark.h>

#include <cmath>

#include "iterboot/bootstrap.hpp"
#include "iterboot/gaussian.hpp"

namespace {

using namespace iterboot;

ParamVector unit_theta(std::size_t d) { return ParamVector(d, 1.0 / std::sqrt(static_cast<double>(d))); }

void BM_BootstrapStepGaussianShift(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto model = models::ModelSpec::gaussian_shift(models::ScalingMap::scalar(d, 1.0));
  const ParamVector theta = unit_theta(d);
  Stream rng(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(models::bootstrap_step(model, theta, 1000, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BootstrapStepGaussianShift)->Arg(2)->Arg(20)->Arg(100);

void BM_BootstrapStepRademacher(benchmark::State& state) {
  const std::size_t d = 4;
  std::vector<ParamVector> dirs;
  for (std::size_t i = 0; i < d; ++i) {
    ParamVector e(d);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  const auto model = models::ModelSpec::independent_components(
      dirs, std::vector(d, models::ComponentNoise::rademacher), models::ScalingMap::scalar(d, 1.0));
  Stream rng(2, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(models::bootstrap_step(model, unit_theta(d), state.range(0), rng));
}
BENCHMARK(BM_BootstrapStepRademacher)->Arg(100)->Arg(100000);

// One f_k evaluation with M chains: the inner loop of every risk experiment.
void BM_FkEstimate(benchmark::State& state) {
  const std::size_t d = 20, chains = 1000;
  const int k = static_cast<int>(state.range(0));
  const auto model = models::ModelSpec::gaussian_shift(models::ScalingMap::scalar(d, 1.0));
  const auto f = functionals::Functional::squared_norm(d);
  const ParamVector theta = unit_theta(d);
  std::uint32_t r = 0;
  for (auto _ : state) {
    Stream rng(3, r++, 0);
    benchmark::DoNotOptimize(bootstrap::fk_estimate_at(model, f, theta, k, 2000, chains, rng));
  }
  state.SetItemsProcessed(state.iterations() * chains * k);
}
BENCHMARK(BM_FkEstimate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TildeFkEstimate(benchmark::State& state) {
  const std::size_t d = 20, chains = 1000;
  const auto model = models::ModelSpec::gaussian_shift(models::ScalingMap::diagonal_tanh(
      std::vector<double>(d, 1.5), std::vector<double>(d, 0.5)));
  const auto f = functionals::Functional::squared_norm(d);
  const ParamVector theta = unit_theta(d);
  const double delta = gaussian::default_delta(model, theta, 2000);
  std::uint32_t r = 0;
  for (auto _ : state) {
    Stream rng(4, r++, 0);
    benchmark::DoNotOptimize(gaussian::tilde_fk_estimate(model, f, theta, 2, 2000, delta, chains, rng));
  }
}
BENCHMARK(BM_TildeFkEstimate)->Unit(benchmark::kMillisecond);

}  // namespace
