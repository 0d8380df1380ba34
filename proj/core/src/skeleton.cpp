#include "fsrd/skeleton.hpp"

#include <cmath>

#include "stepping.hpp"

namespace fsrd {

namespace detail {

double advance(Field& u, int step, const Model& model, const SolverParams& params,
               const StepContext& ctx, std::span<const double> v_row,
               std::span<const double> xi_row, double sqrt_eps) {
  const double t = step * params.dt;
  const double dt = params.dt;

  Field rhs = u;
  {
    const Field fu = ctx.tamed ? eval_F_tamed(model.drift, t, u, dt)
                               : eval_F(model.drift, t, u);
    axpy(rhs, -dt, fu);
  }
  if (model.forcing) axpy(rhs, dt, *model.forcing);
  if (!v_row.empty()) {
    const Field sv = apply_sigma(model.noise, t, u, v_row);
    axpy(rhs, dt, sv);
  }
  if (!xi_row.empty() && sqrt_eps != 0.0) {
    const Field sx = apply_sigma(model.noise, t, u, xi_row);
    axpy(rhs, sqrt_eps, sx);
  }

  auto c = forward(rhs);
  apply_multiplier(c, ctx.mult);
  double semi = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) semi += ctx.k2a[i] * std::norm(c.coeffs[i]);
  semi *= ctx.vol;

  u = inverse(c);
  if (!u.all_finite() || !std::isfinite(semi))
    throw NonFiniteError("state is not finite", static_cast<std::size_t>(step) + 1);
  return semi;
}

StepRecord make_record(const Field& u, double seminorm_sq, int step, double dt, double p) {
  const double l2 = l2_norm(u);
  return StepRecord{step * dt, l2, std::sqrt(l2 * l2 + seminorm_sq), lp_norm(u, p)};
}

} // namespace detail

namespace {

void validate_inputs(const Field& u0, const Model& model, const SolverParams& params) {
  params.validate();
  model.noise.validate();
  if (u0.grid != model.noise.grid())
    throw InvalidArgument("initial state grid != noise grid");
  if (model.forcing && model.forcing->grid != u0.grid)
    throw InvalidArgument("forcing grid != state grid");
  if (!u0.all_finite()) throw NonFiniteError("initial state is not finite", 0);
}

void validate_control(const Control& v, const Model& model, const SolverParams& params) {
  if (v.steps() != params.steps)
    throw InvalidArgument("control step count != solver step count");
  if (v.modes() != model.noise.modes)
    throw InvalidArgument("control mode count != noise mode count");
  if (std::fabs(v.dt() - params.dt) > 1e-12 * params.dt)
    throw InvalidArgument("control dt != solver dt");
}

} // namespace

Trajectory integrate_skeleton(const Field& u0, const Control& v, const Model& model,
                              const SolverParams& params) {
  validate_inputs(u0, model, params);
  validate_control(v, model, params);

  detail::StepContext ctx(u0.grid, model, params);
  Trajectory traj;
  traj.dt = params.dt;
  traj.fields.reserve(static_cast<std::size_t>(params.steps) + 1);
  traj.records.reserve(static_cast<std::size_t>(params.steps) + 1);
  traj.fields.push_back(u0);
  traj.records.push_back(detail::make_record(u0, h_alpha_seminorm_sq(u0, params.alpha), 0,
                                             params.dt, model.drift.p));

  Field u = u0;
  for (int m = 0; m < params.steps; ++m) {
    try {
      const double semi = detail::advance(u, m, model, params, ctx, v.row(m), {}, 0.0);
      traj.fields.push_back(u);
      traj.records.push_back(detail::make_record(u, semi, m + 1, params.dt, model.drift.p));
    } catch (const NonFiniteError& e) {
      detail::rethrow_tagged(e, m + 1);
    }
  }
  return traj;
}

PathDistance path_distance(const Trajectory& t1, const Trajectory& t2, double alpha) {
  if (t1.steps() != t2.steps()) throw InvalidArgument("paths have different step counts");
  if (t1.dt != t2.dt) throw InvalidArgument("paths have different dt");
  PathDistance d;
  for (int m = 0; m <= t1.steps(); ++m) {
    Field diff = t1.fields[static_cast<std::size_t>(m)];
    axpy(diff, -1.0, t2.fields[static_cast<std::size_t>(m)]);
    const double l2 = l2_norm(diff);
    d.sup_l2 = std::max(d.sup_l2, l2);
    if (m < t1.steps())
      d.int_h_alpha_sq += t1.dt * (l2 * l2 + h_alpha_seminorm_sq(diff, alpha));
  }
  return d;
}

PathDistance solution_map_distance(const Field& u01, const Control& v1, const Field& u02,
                                   const Control& v2, const Model& model,
                                   const SolverParams& params) {
  const Trajectory t1 = integrate_skeleton(u01, v1, model, params);
  const Trajectory t2 = integrate_skeleton(u02, v2, model, params);
  return path_distance(t1, t2, params.alpha);
}

} // namespace fsrd
