#include <benchmark/benchmark.h>

#include "kepart/ensemble.hpp"
#include "kepart/linalg.hpp"
#include "kepart/partition.hpp"
#include "kepart/random.hpp"

namespace {

using namespace kepart;

ParticleSystem system_for(const benchmark::State& state) {
  RandomStream rng(1, 0);
  return sample_system(state.range(0), state.range(1), MassMode::Random, rng);
}

void BM_ThinSvd(benchmark::State& state) {
  const ParticleSystem s = system_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(thin_svd(s.Z));
}
BENCHMARK(BM_ThinSvd)->Args({2, 3})->Args({2, 10})->Args({2, 100})->Args({3, 8})->Args({5, 50});

void BM_ComputePartition(benchmark::State& state) {
  const ParticleSystem s = system_for(state);
  const double m = s.total_mass();
  for (auto _ : state) benchmark::DoNotOptimize(compute_partition(m, s.Z, s.Zdot));
}
BENCHMARK(BM_ComputePartition)->Args({2, 3})->Args({2, 10})->Args({2, 100})->Args({3, 8})->Args({5, 50});

void BM_SampleSystem(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(7, i++);
    benchmark::DoNotOptimize(sample_system(state.range(0), state.range(1), MassMode::Random, rng));
  }
}
BENCHMARK(BM_SampleSystem)->Args({2, 3})->Args({2, 100});

}  // namespace

BENCHMARK_MAIN();
