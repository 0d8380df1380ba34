#include "fsrd/spde.hpp"

#include <cmath>

#include "fsrd/spectral.hpp"
#include "stepping.hpp"

namespace fsrd {

namespace {

void validate_common(const Field& u0, const Model& model, const SolverParams& params) {
  params.validate();
  model.noise.validate();
  if (u0.grid != model.noise.grid())
    throw InvalidArgument("initial state grid != noise grid");
  if (model.forcing && model.forcing->grid != u0.grid)
    throw InvalidArgument("forcing grid != state grid");
  if (!u0.all_finite()) throw NonFiniteError("initial state is not finite", 0);
}

IncrementProvider stream_provider(const NoiseStream& stream, double dt) {
  return [stream, dt](int step, std::span<double> out) {
    stream.fill_increments(static_cast<std::uint64_t>(step), dt, out);
  };
}

Trajectory run(const Field& u0, double eps, const Control* v, const Model& model,
               const SolverParams& params, const IncrementProvider& increments) {
  validate_common(u0, model, params);
  if (v) {
    if (v->steps() != params.steps)
      throw InvalidArgument("control step count != solver step count");
    if (v->modes() != model.noise.modes)
      throw InvalidArgument("control mode count != noise mode count");
    if (std::fabs(v->dt() - params.dt) > 1e-12 * params.dt)
      throw InvalidArgument("control dt != solver dt");
    if (!(eps > 0.0) || eps > 1.0)
      throw InvalidArgument("tilted simulation needs eps in (0, 1]");
  } else {
    if (!(eps >= 0.0) || eps > 1.0) throw InvalidArgument("eps must lie in [0, 1]");
  }

  detail::StepContext ctx(u0.grid, model, params);
  const double sqrt_eps = std::sqrt(eps);
  const auto modes = static_cast<std::size_t>(model.noise.modes);

  Trajectory traj;
  traj.dt = params.dt;
  traj.fields.reserve(static_cast<std::size_t>(params.steps) + 1);
  traj.records.reserve(static_cast<std::size_t>(params.steps) + 1);
  traj.fields.push_back(u0);
  traj.records.push_back(detail::make_record(u0, h_alpha_seminorm_sq(u0, params.alpha), 0,
                                             params.dt, model.drift.p));

  Field u = u0;
  std::vector<double> xi(modes);
  double dot_term = 0.0;  // sum_m v_m . DW^m
  double quad_term = 0.0; // sum_m dt |v_m|^2
  for (int m = 0; m < params.steps; ++m) {
    increments(m, xi);
    std::span<const double> v_row = v ? v->row(m) : std::span<const double>{};
    if (v) {
      double vdw = 0.0, vv = 0.0;
      for (std::size_t k = 0; k < modes; ++k) {
        vdw += v_row[k] * xi[k];
        vv += v_row[k] * v_row[k];
      }
      dot_term += vdw;
      quad_term += params.dt * vv;
    }
    try {
      const double semi = detail::advance(u, m, model, params, ctx, v_row, xi, sqrt_eps);
      traj.fields.push_back(u);
      traj.records.push_back(detail::make_record(u, semi, m + 1, params.dt, model.drift.p));
    } catch (const NonFiniteError& e) {
      detail::rethrow_tagged(e, m + 1);
    }
  }
  if (v) {
    const double lw = -dot_term / sqrt_eps - quad_term / (2.0 * eps);
    if (!std::isfinite(lw)) throw NonFiniteError("log weight is not finite");
    traj.log_weight = lw;
  }
  return traj;
}

} // namespace

IncrementProvider coarsened_increments(const NoiseStream& fine, double fine_dt,
                                       int factor, int modes) {
  if (factor < 1) throw InvalidArgument("coarsening factor must be >= 1");
  if (modes < 1) throw InvalidArgument("coarsened increments need modes >= 1");
  if (!(fine_dt > 0.0)) throw InvalidArgument("fine dt must be positive");
  return [fine, fine_dt, factor, modes](int step, std::span<double> out) {
    if (out.size() != static_cast<std::size_t>(modes))
      throw InvalidArgument("increment buffer length != modes");
    std::vector<double> buf(static_cast<std::size_t>(modes));
    for (auto& x : out) x = 0.0;
    for (int j = 0; j < factor; ++j) {
      fine.fill_increments(static_cast<std::uint64_t>(step) * factor +
                               static_cast<std::uint64_t>(j),
                           fine_dt, buf);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += buf[k];
    }
  };
}

Trajectory simulate_spde(const Field& u0, double eps, const Model& model,
                         const SolverParams& params, const NoiseStream& stream) {
  return run(u0, eps, nullptr, model, params, stream_provider(stream, params.dt));
}

Trajectory simulate_spde(const Field& u0, double eps, const Model& model,
                         const SolverParams& params, const IncrementProvider& increments) {
  return run(u0, eps, nullptr, model, params, increments);
}

Trajectory simulate_shifted(const Field& u0, double eps, const Control& v,
                            const Model& model, const SolverParams& params,
                            const NoiseStream& stream) {
  return run(u0, eps, &v, model, params, stream_provider(stream, params.dt));
}

Trajectory simulate_shifted(const Field& u0, double eps, const Control& v,
                            const Model& model, const SolverParams& params,
                            const IncrementProvider& increments) {
  return run(u0, eps, &v, model, params, increments);
}

double energy_residual(const Trajectory& traj, double eps, const Model& model,
                       const SolverParams& params, const IncrementProvider& increments) {
  params.validate();
  model.noise.validate();
  if (traj.steps() != params.steps)
    throw InvalidArgument("trajectory step count != solver step count");
  if (std::fabs(traj.dt - params.dt) > 1e-12 * params.dt)
    throw InvalidArgument("trajectory dt != solver dt");
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");

  const double dt = params.dt;
  const double sqrt_eps = std::sqrt(eps);
  const auto modes = static_cast<std::size_t>(model.noise.modes);
  std::vector<double> xi(modes);

  const double u0sq = [&] {
    const double n = l2_norm(traj.initial());
    return n * n;
  }();

  double lhs_acc = 0.0;
  double rhs_acc = 0.0;
  double worst = 0.0;
  for (int m = 0; m <= params.steps; ++m) {
    const Field& um = traj.fields[static_cast<std::size_t>(m)];
    const double l2 = l2_norm(um);
    const double lhs = l2 * l2 + lhs_acc;
    const double rhs = u0sq + rhs_acc;
    worst = std::max(worst, std::fabs(lhs - rhs));
    if (m == params.steps) break;

    const double t = m * dt;
    lhs_acc += 2.0 * dt * h_alpha_seminorm_sq(um, params.alpha);
    lhs_acc += 2.0 * dt * inner(eval_F(model.drift, t, um), um);
    if (model.forcing) rhs_acc += 2.0 * dt * inner(*model.forcing, um);
    if (eps > 0.0) {
      rhs_acc += eps * dt * hs_norm_sq(model.noise, t, um);
      increments(m, xi);
      rhs_acc += 2.0 * sqrt_eps * inner(um, apply_sigma(model.noise, t, um, xi));
    }
  }
  return worst;
}

double energy_residual(const Trajectory& traj, double eps, const Model& model,
                       const SolverParams& params, const NoiseStream& stream) {
  return energy_residual(traj, eps, model, params, stream_provider(stream, params.dt));
}

} // namespace fsrd
