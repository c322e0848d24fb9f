#include <benchmark/benchmark.h>

#include "triplex/construction.hpp"
#include "triplex/design.hpp"
#include "triplex/families.hpp"
#include "triplex/resolution.hpp"

using namespace triplex;

static void BM_RoundRobin(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(round_robin_one_factorization(v));
}
BENCHMARK(BM_RoundRobin)->Arg(8)->Arg(32)->Arg(128);

static void BM_CyclicOrbits(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(cyclic_orbit_resolution(v, k));
}
BENCHMARK(BM_CyclicOrbits)->Args({8, 3})->Args({17, 4})->Args({32, 5});

static void BM_Baranyai(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(baranyai_parallelism(v, k));
}
BENCHMARK(BM_Baranyai)->Args({9, 3})->Args({12, 4})->Args({32, 4})->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const ConstructionSpec spec = family_thm_3_1(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(spec));
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_LambdaProfile(benchmark::State& state) {
  const Assembled a = assemble(family_thm_3_1(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_profile(a.design, 3));
}
BENCHMARK(BM_LambdaProfile)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_TripleQueries(benchmark::State& state) {
  const ConstructionSpec spec = family_thm_AB(17, 3, 1);
  const TripleCounter tc(spec);
  const Design all = complete_design(34, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto b = all.block(i);
    benchmark::DoNotOptimize(tc.count(Block(b.begin(), b.end())));
    i = (i + 1) % all.block_count();
  }
}
BENCHMARK(BM_TripleQueries);

BENCHMARK_MAIN();
