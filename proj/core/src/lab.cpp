#include "fsrd/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsrd/parallel.hpp"
#include "fsrd/rng.hpp"
#include "fsrd/spde.hpp"
#include "fsrd/spectral.hpp"

namespace fsrd {

namespace {

constexpr std::uint32_t kDomainBallNormal = 3;
constexpr std::uint32_t kDomainBallRadius = 4;

} // namespace

Control sample_ball_control(int steps, int modes, double dt, double energy_radius,
                            std::uint64_t seed, std::uint64_t sample) {
  if (!(energy_radius >= 0.0)) throw InvalidArgument("energy radius must be >= 0");
  std::vector<double> g(static_cast<std::size_t>(steps) * static_cast<std::size_t>(modes));
  std::size_t idx = 0;
  for (int m = 0; m < steps; ++m)
    for (int k = 0; k < modes; ++k)
      g[idx++] = counter_normal(seed, kDomainBallNormal, sample, static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(k));
  double norm_sq = 0.0;
  for (double x : g) norm_sq += x * x;
  norm_sq *= dt;
  if (norm_sq > 0.0) {
    const double dim = static_cast<double>(steps) * static_cast<double>(modes);
    const double u = counter_uniform(seed, kDomainBallRadius, sample, 0, 0);
    const double target = energy_radius * std::pow(u, 1.0 / dim);
    const double scale = target / std::sqrt(norm_sq);
    for (double& x : g) x *= scale;
  }
  return Control(steps, modes, dt, std::move(g));
}

TailResult tail_experiment(const Field& u0, const Model& model, const SolverParams& params,
                           const TailParams& p, std::uint64_t seed, int threads) {
  params.validate();
  if (p.radii.empty()) throw InvalidArgument("tail experiment needs at least one radius");
  if (p.energies.empty()) throw InvalidArgument("tail experiment needs at least one energy");
  if (p.controls < 1) throw InvalidArgument("tail experiment needs at least one control");
  const Grid& grid = u0.grid;
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    if (!(p.radii[i] > 0.0) || !(p.radii[i] < grid.half_width()))
      throw InvalidArgument("tail radius must lie strictly inside the box");
    if (i > 0 && !(p.radii[i] > p.radii[i - 1]))
      throw InvalidArgument("tail radii must be strictly increasing");
  }

  const int ne = static_cast<int>(p.energies.size());
  const int nr = static_cast<int>(p.radii.size());
  const int modes = model.noise.modes;

  // slot[c] = sup-in-time tail mass per (energy, radius), or empty on blow-up.
  std::vector<std::vector<double>> slot(static_cast<std::size_t>(p.controls));
  std::vector<char> ok(static_cast<std::size_t>(p.controls), 0);

  parallel_for(p.controls, threads, [&](int c) {
    std::vector<double> sup(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nr), 0.0);
    bool good = true;
    for (int e = 0; e < ne && good; ++e) {
      Control v = sample_ball_control(params.steps, modes, params.dt, p.energies[e], seed,
                                      static_cast<std::uint64_t>(c));
      try {
        Trajectory traj = integrate_skeleton(u0, v, model, params);
        for (const Field& u : traj.fields)
          for (int r = 0; r < nr; ++r) {
            double& s = sup[static_cast<std::size_t>(e) * nr + r];
            s = std::max(s, tail_mass(u, p.radii[r]));
          }
      } catch (const NonFiniteError&) {
        good = false;
      }
    }
    if (good) {
      slot[static_cast<std::size_t>(c)] = std::move(sup);
      ok[static_cast<std::size_t>(c)] = 1;
    }
  });

  TailResult out;
  for (int c = 0; c < p.controls; ++c)
    if (!ok[static_cast<std::size_t>(c)]) ++out.excluded;

  std::vector<double> worst(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nr), 0.0);
  for (int c = 0; c < p.controls; ++c) {
    if (!ok[static_cast<std::size_t>(c)]) continue;
    const auto& sup = slot[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < worst.size(); ++i) worst[i] = std::max(worst[i], sup[i]);
  }

  out.table.columns = {"energy", "radius", "worst_sup_tail"};
  for (int e = 0; e < ne; ++e)
    for (int r = 0; r < nr; ++r)
      out.table.rows.push_back(
          {p.energies[e], p.radii[r], worst[static_cast<std::size_t>(e) * nr + r]});

  // Tail mass at a larger radius sums a subset of the same nonnegative terms,
  // so monotonicity must hold exactly, sample by sample.
  double worst_violation = 0.0;
  for (int e = 0; e < ne; ++e)
    for (int r = 1; r < nr; ++r) {
      const double prev = worst[static_cast<std::size_t>(e) * nr + r - 1];
      const double cur = worst[static_cast<std::size_t>(e) * nr + r];
      worst_violation = std::max(worst_violation, cur - prev);
    }
  out.verdicts.push_back({"tail-monotone", worst_violation <= 0.0, worst_violation, 0.0,
                          "largest increase of worst_sup_tail along radii"});

  double at_largest = 0.0;
  for (int e = 0; e < ne; ++e)
    at_largest = std::max(at_largest, worst[static_cast<std::size_t>(e) * nr + nr - 1]);
  out.verdicts.push_back({"tail-threshold", at_largest <= p.threshold, at_largest, p.threshold,
                          "worst_sup_tail at the largest radius, all energies"});

  out.verdicts.push_back({"no-blow-ups", out.excluded == 0, static_cast<double>(out.excluded),
                          0.0, "controls excluded for non-finite states"});
  return out;
}

WeakResult weak_convergence_experiment(const Field& u0, const Control& v_base,
                                       const Model& model, const SolverParams& params,
                                       const WeakParams& p) {
  params.validate();
  if (p.mode < 1 || p.mode > v_base.modes())
    throw InvalidArgument("perturbed mode out of range");
  if (p.n_list.size() < 2) throw InvalidArgument("need at least two oscillation counts");
  for (std::size_t i = 0; i < p.n_list.size(); ++i) {
    if (p.n_list[i] < 1) throw InvalidArgument("oscillation counts must be >= 1");
    if (i > 0 && p.n_list[i] <= p.n_list[i - 1])
      throw InvalidArgument("oscillation counts must be strictly increasing");
  }
  if (2 * p.n_list.back() >= params.steps)
    throw InvalidArgument("fastest oscillation must stay below the step Nyquist rate");

  const double T = params.dt * params.steps;
  Trajectory base = integrate_skeleton(u0, v_base, model, params);

  WeakResult out;
  out.table.columns = {"n", "ctrl_l2_dist", "sup_l2_dist", "int_h_alpha_sq_dist"};

  std::vector<double> sups, ints, ctrls;
  for (int n : p.n_list) {
    std::vector<double> vals = v_base.values();
    double diff_sq = 0.0;
    for (int m = 0; m < params.steps; ++m) {
      const double t = params.dt * m;
      const double d = p.amplitude * std::sin(2.0 * std::numbers::pi * n * t / T);
      vals[static_cast<std::size_t>(m) * v_base.modes() + (p.mode - 1)] += d;
      diff_sq += params.dt * d * d;
    }
    Control vn(params.steps, v_base.modes(), params.dt, std::move(vals));
    Trajectory tn = integrate_skeleton(u0, vn, model, params);
    PathDistance d = path_distance(base, tn, params.alpha);
    const double ctrl = std::sqrt(diff_sq);
    out.table.rows.push_back({static_cast<double>(n), ctrl, d.sup_l2, d.int_h_alpha_sq});
    ctrls.push_back(ctrl);
    sups.push_back(d.sup_l2);
    ints.push_back(d.int_h_alpha_sq);
  }

  double ctrl_spread = 0.0;
  for (double c : ctrls) ctrl_spread = std::max(ctrl_spread, std::abs(c - ctrls.front()));
  const double ctrl_tol = 1e-8 * (std::abs(ctrls.front()) + 1.0);
  out.verdicts.push_back({"control-distance-constant", ctrl_spread <= ctrl_tol, ctrl_spread,
                          ctrl_tol, "spread of the control L2 distances"});

  bool sup_dec = true, int_dec = true;
  for (std::size_t i = 1; i < sups.size(); ++i) {
    if (!(sups[i] < sups[i - 1])) sup_dec = false;
    if (!(ints[i] < ints[i - 1])) int_dec = false;
  }
  out.verdicts.push_back({"sup-distance-decreasing", sup_dec, sups.back(), sups.front(),
                          "sup_l2_dist strictly decreasing in n"});
  out.verdicts.push_back({"energy-distance-decreasing", int_dec, ints.back(), ints.front(),
                          "int_h_alpha_sq_dist strictly decreasing in n"});
  return out;
}

MomentResult moment_bound_experiment(const Field& u0, const Model& model,
                                     const SolverParams& params, const MomentParams& p,
                                     std::uint64_t seed, int threads) {
  params.validate();
  if (p.eps_list.empty()) throw InvalidArgument("moment experiment needs at least one eps");
  for (double e : p.eps_list)
    if (!(e > 0.0) || e > 1.0) throw InvalidArgument("eps must lie in (0, 1]");
  if (p.samples < 1) throw InvalidArgument("moment experiment needs at least one sample");
  if (!(p.ratio_bound >= 1.0)) throw InvalidArgument("ratio bound must be >= 1");

  const int modes = model.noise.modes;
  const int ne = static_cast<int>(p.eps_list.size());
  const double pexp = model.drift.p;

  // slot[s] = {sup_l2_sq, int_h_alpha_sq, int_lp} per eps, or empty on blow-up.
  std::vector<std::vector<double>> slot(static_cast<std::size_t>(p.samples));
  std::vector<char> ok(static_cast<std::size_t>(p.samples), 0);

  parallel_for(p.samples, threads, [&](int s) {
    Control v = sample_ball_control(params.steps, modes, params.dt, p.energy, seed,
                                    static_cast<std::uint64_t>(s));
    NoiseStream stream(seed, static_cast<std::uint64_t>(s));
    std::vector<double> acc(static_cast<std::size_t>(ne) * 3, 0.0);
    bool good = true;
    for (int e = 0; e < ne && good; ++e) {
      try {
        Trajectory traj = simulate_shifted(u0, p.eps_list[e], v, model, params, stream);
        double sup_sq = 0.0, int_h = 0.0, int_lp = 0.0;
        for (int m = 0; m <= params.steps; ++m) {
          const StepRecord& r = traj.records[static_cast<std::size_t>(m)];
          sup_sq = std::max(sup_sq, r.l2 * r.l2);
          if (m < params.steps) {
            int_h += params.dt * r.h_alpha * r.h_alpha;
            int_lp += params.dt * std::pow(r.lp, pexp);
          }
        }
        acc[static_cast<std::size_t>(e) * 3 + 0] = sup_sq;
        acc[static_cast<std::size_t>(e) * 3 + 1] = int_h;
        acc[static_cast<std::size_t>(e) * 3 + 2] = int_lp;
      } catch (const NonFiniteError&) {
        good = false;
      }
    }
    if (good) {
      slot[static_cast<std::size_t>(s)] = std::move(acc);
      ok[static_cast<std::size_t>(s)] = 1;
    }
  });

  MomentResult out;
  int used = 0;
  std::vector<double> mean(static_cast<std::size_t>(ne) * 3, 0.0);
  for (int s = 0; s < p.samples; ++s) {
    if (!ok[static_cast<std::size_t>(s)]) {
      ++out.excluded;
      continue;
    }
    ++used;
    const auto& acc = slot[static_cast<std::size_t>(s)];
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += acc[i];
  }
  if (used > 0)
    for (double& m : mean) m /= used;

  out.table.columns = {"eps", "mean_sup_l2_sq", "mean_int_h_alpha_sq", "mean_int_lp",
                       "mean_total"};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int e = 0; e < ne; ++e) {
    const double a = mean[static_cast<std::size_t>(e) * 3 + 0];
    const double b = mean[static_cast<std::size_t>(e) * 3 + 1];
    const double c = mean[static_cast<std::size_t>(e) * 3 + 2];
    const double total = a + b + c;
    out.table.rows.push_back({p.eps_list[e], a, b, c, total});
    lo = std::min(lo, total);
    hi = std::max(hi, total);
  }
  out.ratio = (used > 0 && lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();

  out.verdicts.push_back({"moment-ratio", out.ratio <= p.ratio_bound, out.ratio, p.ratio_bound,
                          "max/min of mean_total across eps"});
  out.verdicts.push_back({"no-blow-ups", out.excluded == 0, static_cast<double>(out.excluded),
                          0.0, "samples excluded for non-finite states"});
  return out;
}

} // namespace fsrd
