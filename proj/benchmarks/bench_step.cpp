#include <benchmark/benchmark.h>

#include <cmath>

#include "fsrd/rate.hpp"
#include "fsrd/spde.hpp"

using namespace fsrd;

namespace {

constexpr int kSteps = 64;

Model linear_model(const Grid& g) {
  NoiseBuildParams np;
  np.modes = 1;
  np.amp = 1.0;
  np.amp_decay = 0.0;
  return Model{DriftSpec::canonical_family(2.0, 0.25, 0.0), make_noise(g, np), std::nullopt};
}

Model quartic_model(const Grid& g) {
  NoiseBuildParams np;
  np.modes = 2;
  np.profile = "enveloped-trig";
  np.amp = 0.3;
  np.family = Sigma2Family::Bounded;
  np.c_amp = 0.4;
  np.c_decay = 0.5;
  np.kappa_amp = 0.6;
  np.kappa_width = 1.5;
  return Model{DriftSpec::canonical_family(4.0, 1.0, 0.5), make_noise(g, np), std::nullopt};
}

SolverParams params_for(int steps) {
  SolverParams p;
  p.alpha = 0.5;
  p.steps = steps;
  p.dt = 1.0 / steps;
  return p;
}

void BM_simulate_linear(benchmark::State& state) {
  Grid g{1, static_cast<int>(state.range(0)), M_PI};
  Model model = linear_model(g);
  SolverParams params = params_for(kSteps);
  Field u0(g);
  NoiseStream stream(1, 0);
  for (auto _ : state) {
    Trajectory t = simulate_spde(u0, 0.1, model, params, stream);
    benchmark::DoNotOptimize(t.terminal().values.data());
  }
  state.SetItemsProcessed(state.iterations() * kSteps); // items = solver steps
}
BENCHMARK(BM_simulate_linear)->Arg(128)->Arg(256);

void BM_simulate_quartic(benchmark::State& state) {
  Grid g{1, static_cast<int>(state.range(0)), 10.0};
  Model model = quartic_model(g);
  SolverParams params = params_for(kSteps);
  Field u0 = sample(g, [](std::array<double, 3> x) { return std::exp(-x[0] * x[0]); });
  NoiseStream stream(1, 0);
  for (auto _ : state) {
    Trajectory t = simulate_spde(u0, 0.1, model, params, stream);
    benchmark::DoNotOptimize(t.terminal().values.data());
  }
  state.SetItemsProcessed(state.iterations() * kSteps);
}
BENCHMARK(BM_simulate_quartic)->Arg(128)->Arg(256);

void BM_skeleton(benchmark::State& state) {
  Grid g{1, 128, 10.0};
  Model model = quartic_model(g);
  SolverParams params = params_for(kSteps);
  Field u0 = sample(g, [](std::array<double, 3> x) { return std::exp(-x[0] * x[0]); });
  Control v(kSteps, model.noise.modes, params.dt,
            std::vector<double>(static_cast<std::size_t>(kSteps) * model.noise.modes, 0.3));
  for (auto _ : state) {
    Trajectory t = integrate_skeleton(u0, v, model, params);
    benchmark::DoNotOptimize(t.terminal().values.data());
  }
  state.SetItemsProcessed(state.iterations() * kSteps);
}
BENCHMARK(BM_skeleton);

// Optimizer hot path: one forward sweep plus the adjoint backward sweep.
void BM_objective_and_gradient(benchmark::State& state) {
  Grid g{1, 128, M_PI};
  Model model = linear_model(g);
  SolverParams params = params_for(256);
  Field u0(g);
  Field target = sample(g, [](std::array<double, 3> x) { return 0.5 * std::sin(x[0]); });
  RateProblem prob(model, params, u0, target);
  Control v(params.steps, model.noise.modes, params.dt,
            std::vector<double>(static_cast<std::size_t>(params.steps) * model.noise.modes, 0.2));
  for (auto _ : state) {
    ObjectiveGradient og = objective_and_gradient(prob, v, 100.0);
    benchmark::DoNotOptimize(og.grad.data());
  }
  state.SetItemsProcessed(state.iterations() * params.steps);
}
BENCHMARK(BM_objective_and_gradient);

} // namespace
