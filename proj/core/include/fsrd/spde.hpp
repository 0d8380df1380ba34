#pragma once

#include <functional>

#include "fsrd/rng.hpp"
#include "fsrd/skeleton.hpp"

namespace fsrd {

// Supplies the Brownian increments Delta W^m (one N(0, dt) entry per mode)
// for step m. The NoiseStream overloads draw them counter-addressed; the
// functional form exists so refinement studies can couple coarse and fine
// runs through the same underlying draws.
using IncrementProvider = std::function<void(int step, std::span<double> out)>;

// Provider that replays `fine` at a dt coarser by `factor`, summing each
// group of consecutive fine increments. Exact coupling: a coarse step's
// increment is the sum of its fine sub-increments.
IncrementProvider coarsened_increments(const NoiseStream& fine, double fine_dt,
                                       int factor, int modes);

// Stochastic path with noise intensity sqrt(eps):
//   u^{m+1} = S_dt [ u^m + dt (-F + g) + sqrt(eps) sigma(t_m, u^m) DW^m ].
// eps in [0, 1]; eps = 0 reproduces the zero-control skeleton exactly.
Trajectory simulate_spde(const Field& u0, double eps, const Model& model,
                         const SolverParams& params, const NoiseStream& stream);
Trajectory simulate_spde(const Field& u0, double eps, const Model& model,
                         const SolverParams& params, const IncrementProvider& increments);

// Same dynamics with the control's drift added,
//   ... + dt sigma(t_m, u^m) v_m ...,
// sampling the measure tilted along v. The trajectory's log_weight holds the
// log density ratio (nominal over sampling), accumulated as
//   -(1/sqrt(eps)) sum_m v_m . DW^m - (1/(2 eps)) sum_m dt |v_m|^2,
// with DW^m the increments actually drawn; exp(log_weight) has mean one
// under the sampling measure. eps in (0, 1].
Trajectory simulate_shifted(const Field& u0, double eps, const Control& v,
                            const Model& model, const SolverParams& params,
                            const NoiseStream& stream);
Trajectory simulate_shifted(const Field& u0, double eps, const Control& v,
                            const Model& model, const SolverParams& params,
                            const IncrementProvider& increments);

// Worst deviation over the run of the quadratic energy balance
//   ||u^m||^2 + 2 sum_{j<m} dt [ ||(-Lap)^{alpha/2} u^j||^2 + <F(t_j, u^j), u^j> ]
//     = ||u^0||^2 + sum_{j<m} [ 2 dt <g, u^j> + eps dt ||sigma(t_j,u^j)||_HS^2
//                               + 2 sqrt(eps) <u^j, sigma(t_j,u^j) DW^j> ],
// evaluated with the model's F (untamed) and left-point quadrature. The
// trajectory must come from simulate_spde with matching model, params, and
// increments. O(dt) on deterministic runs.
double energy_residual(const Trajectory& traj, double eps, const Model& model,
                       const SolverParams& params, const IncrementProvider& increments);
double energy_residual(const Trajectory& traj, double eps, const Model& model,
                       const SolverParams& params, const NoiseStream& stream);

} // namespace fsrd
