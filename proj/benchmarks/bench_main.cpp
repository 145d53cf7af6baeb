#include <benchmark/benchmark.h>

#include "neuroprobe/probe.hpp"
#include "neuroprobe/selection.hpp"
#include "neuroprobe/stats.hpp"
#include "neuroprobe/synth.hpp"

namespace np = neuroprobe;

namespace {

np::ProbeDataset bench_dataset(std::size_t d, std::size_t tokens) {
  np::PlantedSpec spec;
  spec.d = d;
  spec.tokens = tokens;
  spec.planted_dims = np::choose_planted_dims(d, 10, 1);
  return np::make_planted_dataset(spec);
}

void BM_PermutationPValue(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(np::permutation_pvalue(d, k, 2, 10000, 13));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_PermutationPValue)->Args({100, 10})->Args({768, 50});

void BM_HypergeomTail(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(np::hypergeom_tail(768, 50, 10));
}
BENCHMARK(BM_HypergeomTail);

void BM_GreedySelect(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto ds = bench_dataset(d, 1000);
  np::Rng rng(2);
  const auto theta = np::ProbeParameters::random_init(ds.inventory, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(np::greedy_select(theta, ds, 10));
}
BENCHMARK(BM_GreedySelect)->Arg(64)->Arg(768)->Unit(benchmark::kMillisecond);

void BM_TrainingStep(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  auto ds = bench_dataset(d, 256);
  np::Rng rng(3);
  const auto theta = np::ProbeParameters::random_init(ds.inventory, d, rng);
  const auto phi = np::SamplerParameters::uniform(d);
  np::BaselineState baseline;
  for (auto _ : state) {
    const auto subsets = np::sample_batch_subsets(phi, ds.size(), 5, rng);
    benchmark::DoNotOptimize(np::grad_theta(theta, ds, subsets));
    benchmark::DoNotOptimize(np::grad_phi_from_samples(theta, phi, ds, subsets, baseline));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_TrainingStep)->Arg(64)->Arg(768)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
