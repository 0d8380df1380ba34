#pragma once

#include <span>

#include "fsrd/skeleton.hpp"
#include "fsrd/spectral.hpp"

namespace fsrd::detail {

// Shared per-run state for the exponential step: the semigroup multiplier and
// the |xi|^{2 alpha} weights used to record the fractional seminorm while the
// state is already in coefficient space.
struct StepContext {
  std::vector<double> mult;
  std::vector<double> k2a;
  bool tamed;
  double vol;

  StepContext(const Grid& g, const Model& model, const SolverParams& p)
      : mult(semigroup_multiplier(g, p.alpha, p.dt)),
        k2a(wavenumber_sq(g)),
        tamed(taming_active(p, model.drift)),
        vol(g.cell_volume()) {
    if (p.alpha != 1.0) {
      for (double& k2 : k2a) k2 = k2 > 0.0 ? std::pow(k2, p.alpha) : 0.0;
    }
  }
};

// One exponential step in place; v_row/xi_row may be empty. Returns the
// squared fractional seminorm of the new state. Throws NonFiniteError tagged
// with `step` + 1 if the state leaves the finite range.
double advance(Field& u, int step, const Model& model, const SolverParams& params,
               const StepContext& ctx, std::span<const double> v_row,
               std::span<const double> xi_row, double sqrt_eps);

// Norm record for the state after `step` steps.
StepRecord make_record(const Field& u, double seminorm_sq, int step, double dt, double p);

// Overflow inside a drift or noise evaluation surfaces as an untagged
// NonFiniteError; integration loops re-throw it carrying the step index.
[[noreturn]] inline void rethrow_tagged(const NonFiniteError& e, int step) {
  if (e.step == NonFiniteError::npos)
    throw NonFiniteError(e.what(), static_cast<std::size_t>(step));
  throw e;
}

} // namespace fsrd::detail
