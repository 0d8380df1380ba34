#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "fsrd/rng.hpp"

using namespace fsrd;

namespace {

void BM_philox_block(benchmark::State& state) {
  std::array<std::uint32_t, 4> ctr{0, 0, 0, 0};
  std::array<std::uint32_t, 2> key{0x9e3779b9u, 0x243f6a88u};
  for (auto _ : state) {
    ctr[0]++;
    benchmark::DoNotOptimize(philox4x32(ctr, key));
  }
  state.SetItemsProcessed(state.iterations() * 4); // 4 words per block
}
BENCHMARK(BM_philox_block);

void BM_counter_normal(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(counter_normal(42, 0, 0, i++, 0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_counter_normal);

void BM_fill_increments(benchmark::State& state) {
  NoiseStream stream(42, 0);
  std::vector<double> dw(static_cast<std::size_t>(state.range(0)));
  std::uint64_t step = 0;
  for (auto _ : state) {
    stream.fill_increments(step++, 1e-3, dw);
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_fill_increments)->Arg(1)->Arg(4)->Arg(8);

} // namespace

BENCHMARK_MAIN();
