#pragma once

#include <optional>

#include "fsrd/control.hpp"
#include "fsrd/drift.hpp"
#include "fsrd/noise.hpp"
#include "fsrd/trajectory.hpp"

namespace fsrd {

// The equation's ingredients: reaction term, noise operator, optional static
// forcing g.
struct Model {
  DriftSpec drift;
  NoiseSpec noise;
  std::optional<Field> forcing;
};

enum class Taming { Auto, On, Off };

// Time discretization: exponential step with the exact semigroup of the
// fractional Laplacian,
//   u^{m+1} = e^{-dt (-Lap)^alpha} [ u^m + dt (-F(t_m, u^m) + g + sigma(t_m, u^m) v_m) ].
// Auto taming replaces F by F / (1 + dt |F|) once p >= 4, where the explicit
// drift step would otherwise be conditionally stable at best.
struct SolverParams {
  double alpha = 0.5;
  double dt = 0.0;
  int steps = 0;
  Taming taming = Taming::Auto;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("alpha must lie in (0, 1]");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (steps < 1) throw InvalidArgument("step count must be >= 1");
  }
};

inline bool taming_active(const SolverParams& s, const DriftSpec& d) {
  switch (s.taming) {
    case Taming::On: return true;
    case Taming::Off: return false;
    case Taming::Auto: return d.p >= 4.0;
  }
  return false;
}

// Controlled deterministic path for control v. Throws NonFiniteError with the
// step index if the state stops being finite.
Trajectory integrate_skeleton(const Field& u0, const Control& v, const Model& model,
                              const SolverParams& params);

// Distances between the paths driven by (u01, v1) and (u02, v2):
// sup_m ||u1^m - u2^m|| and the quadrature of the squared full H^alpha norm
// of the difference.
struct PathDistance {
  double sup_l2 = 0.0;
  double int_h_alpha_sq = 0.0;
};

PathDistance solution_map_distance(const Field& u01, const Control& v1, const Field& u02,
                                   const Control& v2, const Model& model,
                                   const SolverParams& params);

PathDistance path_distance(const Trajectory& t1, const Trajectory& t2, double alpha);

} // namespace fsrd
