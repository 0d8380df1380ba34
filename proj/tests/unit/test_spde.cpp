#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fsrd/spde.hpp"
#include "fsrd/spectral.hpp"
#include "oracles/ou_chain.hpp"

using namespace fsrd;

namespace {

NoiseSpec unit_mode_noise(const Grid& g, int modes = 1, double amp = 1.0) {
  NoiseBuildParams p;
  p.modes = modes;
  p.amp = amp;
  p.amp_decay = 0.0;
  return make_noise(g, p);
}

} // namespace

TEST_SUITE("spde") {

TEST_CASE("eps = 0 reproduces the zero-control skeleton bitwise") {
  Grid g(1, 32, 2.0);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), unit_mode_noise(g, 2, 0.4), {}};
  SolverParams params{0.6, 0.05, 20, Taming::Auto};
  Field u0 = sample(g, [](const std::array<double, 3>& x) { return std::exp(-x[0] * x[0]); });

  Trajectory stoch = simulate_spde(u0, 0.0, model, params, NoiseStream(42, 0));
  Trajectory det = integrate_skeleton(u0, Control(params.steps, 2, params.dt), model, params);

  REQUIRE(stoch.fields.size() == det.fields.size());
  for (std::size_t m = 0; m < stoch.fields.size(); ++m)
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(stoch.fields[m][i] == det.fields[m][i]);
  CHECK(!stoch.log_weight.has_value());
}

TEST_CASE("single linear mode matches the discrete OU chain statistics") {
  // cos(x)/sqrt(pi) on L = pi has |xi| = 1, so mu0 = 1 for any alpha. Linear
  // drift slope a - b = 0.25. Coefficient recursion:
  //   X^{m+1} = rho X^m + s xi_m,  rho = e^{-dt}(1 - 0.25 dt),
  //   s = e^{-dt} sqrt(eps dt) amp.
  const double L = std::numbers::pi;
  Grid g(1, 64, L);
  NoiseSpec noise = unit_mode_noise(g);
  const Field e1 = noise.sigma1[0];
  Model model{DriftSpec::canonical_family(2.0, 0.5, 0.25), noise, {}};
  SolverParams params{0.5, 0.02, 50, Taming::Auto};
  const double eps = 0.25;
  const double rho = std::exp(-params.dt) * (1.0 - 0.25 * params.dt);
  const double s = std::exp(-params.dt) * std::sqrt(eps * params.dt);
  const double var_th = oracle::ou_variance(rho, s, params.steps);

  const int n = 4000;
  double sum = 0.0, sum_sq = 0.0;
  for (int traj = 0; traj < n; ++traj) {
    Trajectory t = simulate_spde(Field(g, 0.0), eps, model, params, NoiseStream(1234, traj));
    const double x = inner(t.terminal(), e1);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 * std::sqrt(var_th / n));
  CHECK(var == doctest::Approx(var_th).epsilon(0.10));
}

TEST_CASE("exp(log_weight) has mean one under the sampling measure") {
  const double L = std::numbers::pi;
  Grid g(1, 16, L);
  NoiseSpec noise = unit_mode_noise(g);
  Model model{DriftSpec::canonical_family(2.0, 0.5, 0.25), noise, {}};
  SolverParams params{0.5, 0.05, 20, Taming::Auto};
  const double eps = 0.25;
  Control v(params.steps, 1, params.dt, std::vector<double>(20, 0.5));

  // lw = -W_T - 1/2 here, so Var(e^{lw}) = e - 1.
  const int n = 2000;
  double sum = 0.0;
  for (int traj = 0; traj < n; ++traj) {
    Trajectory t = simulate_shifted(Field(g, 0.0), eps, v, model, params,
                                    NoiseStream(777, traj));
    REQUIRE(t.log_weight.has_value());
    sum += std::exp(*t.log_weight);
  }
  const double mean = sum / n;
  const double se = std::sqrt((std::numbers::e - 1.0) / n);
  CHECK(std::fabs(mean - 1.0) < 4.0 * se);
}

TEST_CASE("log_weight replays from the drawn increments") {
  Grid g(1, 16, 2.0);
  NoiseSpec noise = unit_mode_noise(g, 3, 0.6);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), noise, {}};
  SolverParams params{0.7, 0.05, 12, Taming::Auto};
  const double eps = 0.3;
  std::vector<double> vals(12 * 3);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 0.3 * std::sin(0.7 * double(i));
  Control v(12, 3, params.dt, vals);
  NoiseStream stream(99, 5);

  Trajectory t = simulate_shifted(Field(g, 0.1), eps, v, model, params, stream);
  REQUIRE(t.log_weight.has_value());

  double dot = 0.0, quad = 0.0;
  std::vector<double> dw(3);
  for (int m = 0; m < 12; ++m) {
    stream.fill_increments(static_cast<std::uint64_t>(m), params.dt, dw);
    for (int k = 0; k < 3; ++k) {
      dot += v.at(m, k) * dw[static_cast<std::size_t>(k)];
      quad += params.dt * v.at(m, k) * v.at(m, k);
    }
  }
  const double expected = -dot / std::sqrt(eps) - quad / (2.0 * eps);
  CHECK(*t.log_weight == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("coupled refinement converges at first order in dt") {
  Grid g(1, 32, 4.0);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), unit_mode_noise(g, 2, 0.5), {}};
  const double T = 0.5;
  const int fine_steps = 256;
  const double fine_dt = T / fine_steps;
  const double eps = 0.1;
  Field u0 = sample(g, [](const std::array<double, 3>& x) { return std::exp(-x[0] * x[0]); });

  auto coarse_error = [&](int factor, int traj) {
    NoiseStream fine(2024, static_cast<std::uint64_t>(traj));
    SolverParams fine_params{0.5, fine_dt, fine_steps, Taming::Auto};
    Trajectory tf = simulate_spde(u0, eps, model, fine_params, fine);
    SolverParams coarse_params{0.5, fine_dt * factor, fine_steps / factor, Taming::Auto};
    Trajectory tc = simulate_spde(u0, eps, model, coarse_params,
                                  coarsened_increments(fine, fine_dt, factor, 2));
    Field diff = tf.terminal();
    axpy(diff, -1.0, tc.terminal());
    return l2_norm(diff);
  };

  const int n = 8;
  double e2 = 0.0, e4 = 0.0;
  for (int traj = 0; traj < n; ++traj) {
    e2 += coarse_error(2, traj);
    e4 += coarse_error(4, traj);
  }
  CHECK(e2 > 0.0);
  CHECK(e4 / e2 == doctest::Approx(2.0).epsilon(0.4)); // ratio in [1.2, 2.8]
}

TEST_CASE("energy balance residual shrinks at first order on deterministic runs") {
  Grid g(1, 32, 3.0);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), unit_mode_noise(g, 2, 0.5), {}};
  Field u0 = sample(g, [](const std::array<double, 3>& x) {
    return 1.5 * std::exp(-2.0 * x[0] * x[0]);
  });
  const double T = 0.5;
  auto residual = [&](int steps) {
    SolverParams params{0.5, T / steps, steps, Taming::Off};
    NoiseStream stream(5, 0);
    Trajectory t = simulate_spde(u0, 0.0, model, params, stream);
    return energy_residual(t, 0.0, model, params, stream);
  };
  const double r1 = residual(64);
  const double r2 = residual(128);
  CHECK(r1 > 0.0);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.3)); // ratio in [1.4, 2.6]
}

TEST_CASE("energy balance residual decreases under coupled stochastic refinement") {
  Grid g(1, 32, 3.0);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), unit_mode_noise(g, 2, 0.5), {}};
  Field u0 = sample(g, [](const std::array<double, 3>& x) { return std::exp(-x[0] * x[0]); });
  const double T = 0.5;
  const int fine_steps = 256;
  const double fine_dt = T / fine_steps;
  const double eps = 0.1;
  NoiseStream fine(31, 0);

  SolverParams fine_params{0.5, fine_dt, fine_steps, Taming::Auto};
  Trajectory tf = simulate_spde(u0, eps, model, fine_params, fine);
  const double rf = energy_residual(tf, eps, model, fine_params, fine);

  const int factor = 4;
  SolverParams coarse_params{0.5, fine_dt * factor, fine_steps / factor, Taming::Auto};
  IncrementProvider coarse_inc = coarsened_increments(fine, fine_dt, factor, 2);
  Trajectory tc = simulate_spde(u0, eps, model, coarse_params, coarse_inc);
  const double rc = energy_residual(tc, eps, model, coarse_params, coarse_inc);

  CHECK(rf > 0.0);
  CHECK(rc > rf);
}

TEST_CASE("input validation") {
  Grid g(1, 16, 2.0);
  Model model{DriftSpec::canonical_family(4.0, 1.0, 0.5), unit_mode_noise(g), {}};
  SolverParams params{0.5, 0.05, 10, Taming::Auto};
  NoiseStream stream(1, 0);
  CHECK_THROWS_AS(simulate_spde(Field(g, 0.0), -0.1, model, params, stream), InvalidArgument);
  CHECK_THROWS_AS(simulate_spde(Field(g, 0.0), 1.5, model, params, stream), InvalidArgument);
  Control v(10, 1, 0.05);
  CHECK_THROWS_AS(simulate_shifted(Field(g, 0.0), 0.0, v, model, params, stream),
                  InvalidArgument);
  Control bad_modes(10, 2, 0.05);
  CHECK_THROWS_AS(simulate_shifted(Field(g, 0.0), 0.5, bad_modes, model, params, stream),
                  InvalidArgument);
}

} // TEST_SUITE
