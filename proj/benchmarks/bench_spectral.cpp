#include <benchmark/benchmark.h>

#include <cmath>

#include "fsrd/spectral.hpp"

using namespace fsrd;

namespace {

Field gaussian_bump(const Grid& g) {
  return sample(g, [](std::array<double, 3> x) { return std::exp(-x[0] * x[0]); });
}

void BM_forward_inverse(benchmark::State& state) {
  Grid g{1, static_cast<int>(state.range(0)), 10.0};
  Field f = gaussian_bump(g);
  for (auto _ : state) {
    Field back = inverse(forward(f));
    benchmark::DoNotOptimize(back.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_forward_inverse)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);

void BM_frac_laplacian(benchmark::State& state) {
  Grid g{1, static_cast<int>(state.range(0)), 10.0};
  Field f = gaussian_bump(g);
  for (auto _ : state) {
    Field out = frac_laplacian(f, 0.75);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_frac_laplacian)->Arg(128)->Arg(512);

void BM_semigroup_uncached(benchmark::State& state) {
  Grid g{1, 256, 10.0};
  Field f = gaussian_bump(g);
  for (auto _ : state) {
    Field out = semigroup(f, 0.5, 1e-3);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_semigroup_uncached);

// The solver's inner loop: reuse the cached multiplier instead of recomputing
// exp(-dt |xi|^{2 alpha}) every step.
void BM_semigroup_cached(benchmark::State& state) {
  Grid g{1, 256, 10.0};
  Field f = gaussian_bump(g);
  std::vector<double> m = semigroup_multiplier(g, 0.5, 1e-3);
  for (auto _ : state) {
    SpectralField c = forward(f);
    apply_multiplier(c, m);
    Field out = inverse(c);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_semigroup_cached);

void BM_h_alpha_seminorm(benchmark::State& state) {
  Grid g{1, 256, 10.0};
  Field f = gaussian_bump(g);
  for (auto _ : state) {
    double s = h_alpha_seminorm_sq(f, 0.5);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_h_alpha_seminorm);

} // namespace
