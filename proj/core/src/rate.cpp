#include "fsrd/rate.hpp"

#include <cmath>
#include <deque>

#include "fsrd/spectral.hpp"
#include "stepping.hpp"

namespace fsrd {

namespace {

Field apply_semigroup(const Field& f, const detail::StepContext& ctx) {
  auto c = forward(f);
  apply_multiplier(c, ctx.mult);
  return inverse(c);
}

struct ForwardPass {
  std::vector<Field> states; // u^0 .. u^M
  double misfit = 0.0;       // unweighted squared misfit
};

ForwardPass forward_pass(const RateProblem& p, const Control& v,
                         const detail::StepContext& ctx, bool keep_states) {
  ForwardPass fp;
  Field u = p.u0;
  if (keep_states) {
    fp.states.reserve(static_cast<std::size_t>(p.solver.steps) + 1);
    fp.states.push_back(u);
  }
  for (int m = 0; m < p.solver.steps; ++m) {
    detail::advance(u, m, p.model, p.solver, ctx, v.row(m), {}, 0.0);
    if (keep_states) fp.states.push_back(u);
    if (p.kind == TargetKind::Path) {
      Field d = u;
      axpy(d, -1.0, p.target_path[static_cast<std::size_t>(m) + 1]);
      const double n = l2_norm(d);
      fp.misfit += p.solver.dt * p.weight(m + 1) * n * n;
    }
  }
  if (p.kind == TargetKind::Endpoint) {
    Field d = u;
    axpy(d, -1.0, p.target);
    const double n = l2_norm(d);
    fp.misfit = n * n;
  }
  if (!keep_states) fp.states.push_back(u); // terminal only
  return fp;
}

double functional_grad_norm(const std::vector<double>& grad, double dt) {
  double s = 0.0;
  for (double g : grad) s += g * g;
  return std::sqrt(s) / std::sqrt(dt);
}

} // namespace

void RateProblem::validate() const {
  solver.validate();
  model.noise.validate();
  if (u0.grid != model.noise.grid())
    throw InvalidArgument("initial state grid != noise grid");
  if (kind == TargetKind::Endpoint) {
    if (target.grid != u0.grid) throw InvalidArgument("target grid != state grid");
  } else {
    if (target_path.size() != static_cast<std::size_t>(solver.steps) + 1)
      throw InvalidArgument("target path must have steps + 1 fields");
    for (const auto& f : target_path)
      if (f.grid != u0.grid) throw InvalidArgument("target path grid != state grid");
    if (!path_weights.empty() &&
        path_weights.size() != static_cast<std::size_t>(solver.steps) + 1)
      throw InvalidArgument("path weights must have steps + 1 entries");
  }
}

ObjectiveValue objective(const RateProblem& p, const Control& v, double beta) {
  p.validate();
  const detail::StepContext ctx(p.u0.grid, p.model, p.solver);
  const ForwardPass fp = forward_pass(p, v, ctx, false);
  ObjectiveValue val;
  val.action = v.action();
  val.misfit = fp.misfit;
  val.total = val.action + 0.5 * beta * fp.misfit;
  return val;
}

ObjectiveGradient objective_and_gradient(const RateProblem& p, const Control& v,
                                         double beta) {
  p.validate();
  if (v.steps() != p.solver.steps || v.modes() != p.model.noise.modes)
    throw InvalidArgument("control shape does not match problem");
  const detail::StepContext ctx(p.u0.grid, p.model, p.solver);
  const double dt = p.solver.dt;
  const int M = p.solver.steps;
  const auto K = static_cast<std::size_t>(p.model.noise.modes);

  const ForwardPass fp = forward_pass(p, v, ctx, true);

  ObjectiveGradient out;
  out.value.action = v.action();
  out.value.misfit = fp.misfit;
  out.value.total = out.value.action + 0.5 * beta * fp.misfit;
  out.grad.assign(static_cast<std::size_t>(M) * K, 0.0);

  // p_m = dJ/du^m as an L2 gradient field; start at the terminal state.
  Field padj = fp.states[static_cast<std::size_t>(M)];
  if (p.kind == TargetKind::Endpoint) {
    axpy(padj, -1.0, p.target);
    scale(padj, beta);
  } else {
    axpy(padj, -1.0, p.target_path[static_cast<std::size_t>(M)]);
    scale(padj, beta * dt * p.weight(M));
  }

  std::vector<double> sig_adj(K);
  for (int m = M - 1; m >= 0; --m) {
    const double t = m * dt;
    const Field& um = fp.states[static_cast<std::size_t>(m)];
    const Field r = apply_semigroup(padj, ctx);
    adjoint_sigma(p.model.noise, t, um, r, sig_adj);
    for (std::size_t k = 0; k < K; ++k)
      out.grad[static_cast<std::size_t>(m) * K + k] = dt * (v.at(m, static_cast<int>(k)) + sig_adj[k]);
    if (m == 0) break;

    const Field dF = ctx.tamed ? eval_dF_tamed(p.model.drift, t, um, dt)
                               : eval_dF(p.model.drift, t, um);
    const Field dS = sigma_state_deriv(p.model.noise, t, um, v.row(m));
    padj = Field(um.grid);
    for (std::size_t i = 0; i < padj.size(); ++i)
      padj[i] = r[i] * (1.0 - dt * dF[i] + dt * dS[i]);
    if (p.kind == TargetKind::Path) {
      Field d = um;
      axpy(d, -1.0, p.target_path[static_cast<std::size_t>(m)]);
      axpy(padj, beta * dt * p.weight(m), d);
    }
  }
  return out;
}

RateResult minimize(const RateProblem& p, const OptimOptions& opt, const Control& v_init) {
  p.validate();
  if (opt.stages < 1 || opt.max_iterations < 1)
    throw InvalidArgument("optimizer needs at least one stage and one iteration");
  if (!(opt.beta0 > 0.0) || !(opt.beta_factor >= 1.0))
    throw InvalidArgument("penalty continuation needs beta0 > 0 and factor >= 1");

  const double dt = p.solver.dt;
  const int M = p.solver.steps;
  const int K = p.model.noise.modes;
  const std::size_t n = static_cast<std::size_t>(M) * static_cast<std::size_t>(K);

  auto make_control = [&](const std::vector<double>& x) { return Control(M, K, dt, x); };

  std::vector<double> x = v_init.values();
  if (x.size() != n) throw InvalidArgument("initial control shape does not match problem");

  RateResult res{make_control(x)};
  int total_iters = 0;
  bool last_stage_converged = false;
  double beta = opt.beta0;

  for (int stage = 0; stage < opt.stages; ++stage, beta *= opt.beta_factor) {
    ObjectiveGradient og = objective_and_gradient(p, make_control(x), beta);
    std::deque<std::pair<std::vector<double>, std::vector<double>>> mem; // (s, y)
    last_stage_converged = false;

    for (int it = 0; it < opt.max_iterations; ++it) {
      const double gnorm = functional_grad_norm(og.grad, dt);
      if (gnorm <= opt.grad_tol) {
        last_stage_converged = true;
        break;
      }
      ++total_iters;

      // Two-loop recursion; H0 scaled by the latest curvature pair, or by
      // 1/max(1, |g|) when no memory exists so the first step stays tame.
      std::vector<double> d = og.grad;
      std::vector<double> alpha_cache(mem.size());
      for (std::size_t i = mem.size(); i-- > 0;) {
        const auto& [s, y] = mem[i];
        double sy = 0.0, sd = 0.0;
        for (std::size_t j = 0; j < n; ++j) sy += s[j] * y[j];
        for (std::size_t j = 0; j < n; ++j) sd += s[j] * d[j];
        alpha_cache[i] = sd / sy;
        for (std::size_t j = 0; j < n; ++j) d[j] -= alpha_cache[i] * y[j];
      }
      double h0;
      if (mem.empty()) {
        double gn = 0.0;
        for (double g : og.grad) gn += g * g;
        h0 = 1.0 / std::max(1.0, std::sqrt(gn));
      } else {
        const auto& [s, y] = mem.back();
        double sy = 0.0, yy = 0.0;
        for (std::size_t j = 0; j < n; ++j) sy += s[j] * y[j];
        for (std::size_t j = 0; j < n; ++j) yy += y[j] * y[j];
        h0 = sy / yy;
      }
      for (double& dj : d) dj *= h0;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        const auto& [s, y] = mem[i];
        double sy = 0.0, yd = 0.0;
        for (std::size_t j = 0; j < n; ++j) sy += s[j] * y[j];
        for (std::size_t j = 0; j < n; ++j) yd += y[j] * d[j];
        const double b = yd / sy;
        for (std::size_t j = 0; j < n; ++j) d[j] += (alpha_cache[i] - b) * s[j];
      }
      for (double& dj : d) dj = -dj;

      double gd = 0.0;
      for (std::size_t j = 0; j < n; ++j) gd += og.grad[j] * d[j];
      if (!(gd < 0.0)) { // not a descent direction: restart from steepest
        mem.clear();
        double gn = 0.0;
        for (double g : og.grad) gn += g * g;
        const double sc = 1.0 / std::max(1.0, std::sqrt(gn));
        gd = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          d[j] = -sc * og.grad[j];
          gd += og.grad[j] * d[j];
        }
      }

      double step = 1.0;
      std::vector<double> x_new(n);
      ObjectiveValue f_new;
      bool accepted = false;
      for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= opt.backtrack) {
        for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * d[j];
        f_new = objective(p, make_control(x_new), beta);
        if (f_new.total <= og.value.total + opt.armijo_c1 * step * gd) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break; // line search exhausted; stage ends unconverged

      ObjectiveGradient og_new = objective_and_gradient(p, make_control(x_new), beta);
      std::vector<double> s(n), y(n);
      double sy = 0.0, sn = 0.0, yn = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        s[j] = x_new[j] - x[j];
        y[j] = og_new.grad[j] - og.grad[j];
        sy += s[j] * y[j];
        sn += s[j] * s[j];
        yn += y[j] * y[j];
      }
      if (sy > 1e-12 * std::sqrt(sn) * std::sqrt(yn)) {
        mem.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(mem.size()) > opt.lbfgs_memory) mem.pop_front();
      }
      x = std::move(x_new);
      og = std::move(og_new);
    }
    res.grad_norm = functional_grad_norm(og.grad, dt);
  }

  res.v_star = make_control(x);
  res.action = res.v_star.action();
  res.iterations = total_iters;
  res.converged = last_stage_converged;
  res.beta_final = beta / opt.beta_factor;

  const detail::StepContext ctx(p.u0.grid, p.model, p.solver);
  const ForwardPass fp = forward_pass(p, res.v_star, ctx, true);
  if (p.kind == TargetKind::Endpoint) {
    Field d = fp.states.back();
    axpy(d, -1.0, p.target);
    res.endpoint_residual = l2_norm(d);
  } else {
    double acc = 0.0, sup = 0.0;
    for (int m = 1; m <= p.solver.steps; ++m) {
      Field d = fp.states[static_cast<std::size_t>(m)];
      axpy(d, -1.0, p.target_path[static_cast<std::size_t>(m)]);
      const double nm = l2_norm(d);
      acc += dt * p.weight(m) * nm * nm;
      sup = std::max(sup, nm);
    }
    res.path_residual = std::sqrt(acc);
    res.sup_path_residual = sup;
  }
  return res;
}

} // namespace fsrd
