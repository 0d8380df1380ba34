#pragma once

#include "fsrd/control.hpp"
#include "fsrd/skeleton.hpp"

namespace fsrd {

// Minimum-energy control problem behind the exponential cost of rare events:
// minimize action(v) = (1/2) sum_m dt |v_m|^2 subject to the skeleton hitting
// a target, relaxed to the penalized objective
//   J_beta(v) = action(v) + (beta/2) misfit(u_v)
// with misfit either ||u^M - target||^2 (Endpoint) or
// sum_{m=1..M} dt w_m ||u^m - phi^m||^2 (Path).
enum class TargetKind { Endpoint, Path };

struct RateProblem {
  Model model;
  SolverParams solver;
  Field u0;
  TargetKind kind = TargetKind::Endpoint;
  Field target;                     // Endpoint
  std::vector<Field> target_path;   // Path: steps + 1 fields (entry 0 unused)
  std::vector<double> path_weights; // Path: steps + 1 weights; empty = all 1

  RateProblem(Model m, SolverParams s, Field u0_, Field endpoint_target)
      : model(std::move(m)), solver(std::move(s)), u0(std::move(u0_)),
        kind(TargetKind::Endpoint), target(std::move(endpoint_target)) {}

  RateProblem(Model m, SolverParams s, Field u0_, std::vector<Field> path,
              std::vector<double> weights = {})
      : model(std::move(m)), solver(std::move(s)), u0(std::move(u0_)),
        kind(TargetKind::Path), target(u0), target_path(std::move(path)),
        path_weights(std::move(weights)) {}

  void validate() const;
  double weight(int m) const {
    return path_weights.empty() ? 1.0 : path_weights[static_cast<std::size_t>(m)];
  }
};

struct OptimOptions {
  double beta0 = 100.0;
  int stages = 3;
  double beta_factor = 10.0;
  int max_iterations = 400; // per continuation stage
  double grad_tol = 1e-5;   // on sqrt(sum_m dt |v_m + sigma* q_m|^2)
  int lbfgs_memory = 8;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

struct ObjectiveValue {
  double total = 0.0;
  double action = 0.0;
  double misfit = 0.0; // unweighted squared misfit
};

struct ObjectiveGradient {
  ObjectiveValue value;
  std::vector<double> grad; // dJ/dv[m][k], flat, row-major over (step, mode)
};

ObjectiveValue objective(const RateProblem& p, const Control& v, double beta);

// Exact gradient of the discrete objective: backward sweep of the step map's
// adjoint (the semigroup is self-adjoint; drift and noise linearizations are
// pointwise), then grad[m][k] = dt (v[m][k] + <sigma_k(t_m, u^m), q^m>).
ObjectiveGradient objective_and_gradient(const RateProblem& p, const Control& v,
                                         double beta);

struct RateResult {
  Control v_star;
  double action = 0.0;
  double endpoint_residual = 0.0;  // ||u^M - target||, Endpoint mode
  double path_residual = 0.0;      // sqrt(sum dt w ||u - phi||^2), Path mode
  double sup_path_residual = 0.0;  // max_m ||u^m - phi^m||, Path mode
  int iterations = 0;
  bool converged = false; // gradient tolerance reached in the final stage
  double grad_norm = 0.0;
  double beta_final = 0.0;
};

// L-BFGS with Armijo backtracking under beta-continuation
// beta0, beta0 * f, beta0 * f^2, ...; each stage warm-starts from the last.
// Non-convergence is reported through `converged`, never silently.
RateResult minimize(const RateProblem& p, const OptimOptions& opt, const Control& v_init);

} // namespace fsrd
