#include <benchmark/benchmark.h>

#include "eqplant/gf2.hpp"
#include "eqplant/ising.hpp"
#include "eqplant/pt.hpp"
#include "eqplant/xorsat.hpp"

using namespace eqplant;

namespace {

void BM_RowReduce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  Gf2Matrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a.set(r, c, coin(rng));
  for (auto _ : state) benchmark::DoNotOptimize(row_reduce(a).rank);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RowReduce)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNCubed);

void BM_GenerateRegular(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_regular(n, 3, 3, seed++).clauses.size());
}
BENCHMARK(BM_GenerateRegular)->Arg(64)->Arg(1024)->Arg(16384);

void BM_MetropolisSweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = compile(generate_with_nullity(n, 0, 3, 100000), GadgetLibrary::standard());
  Rng rng(2);
  Replica rep(inst, SpinConfig(inst.n_spins()));
  const MetropolisTable table(1.0, inst.max_flip_delta());
  for (auto _ : state) metropolis_sweep(inst, rep, table, rng);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * inst.n_spins()));
}
BENCHMARK(BM_MetropolisSweep)->Arg(32)->Arg(256)->Arg(2048);

void BM_BruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = compile(generate_with_nullity(n, 0, 4, 100000), GadgetLibrary::standard());
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_ground_states(inst).energy_min);
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
