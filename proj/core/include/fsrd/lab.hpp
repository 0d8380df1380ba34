#pragma once

#include <string>
#include <vector>

#include "fsrd/control.hpp"
#include "fsrd/skeleton.hpp"

namespace fsrd {

// Numeric result table; one named column per entry of `columns`.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string name;
  bool pass;
  double value;
  double bound;
  std::string note;
};

inline bool all_pass(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (!v.pass) return false;
  return true;
}

// Worst-case spatial localization over random controls from an energy ball:
// for each energy R and each radius m, the largest over sampled controls of
// sup_t tail_mass(u_v(t), m) along the controlled skeleton. Controls are
// Gaussian samples rescaled to land uniformly in the R-ball (radius taken to
// the 1/(M K) power). Blown-up samples are excluded and counted.
struct TailParams {
  std::vector<double> radii;    // increasing, each inside the box
  std::vector<double> energies; // R values
  int controls = 50;
  double threshold = 1e-6;      // bound checked at the largest radius
};

struct TailResult {
  Table table; // energy, radius, worst_sup_tail
  std::vector<Verdict> verdicts;
  int excluded = 0;
};

TailResult tail_experiment(const Field& u0, const Model& model, const SolverParams& params,
                           const TailParams& p, std::uint64_t seed, int threads);

// Continuity of the control-to-path map under weak but not strong control
// perturbations: v_n = v_base + A sin(2 pi n t / T) on one mode has constant
// L2-in-time distance from v_base while the path distance must shrink as the
// oscillation speeds up.
struct WeakParams {
  double amplitude = 1.0;
  int mode = 1; // 1-based noise mode carrying the perturbation
  std::vector<int> n_list = {1, 2, 4, 8, 16, 32};
};

struct WeakResult {
  Table table; // n, ctrl_l2_dist, sup_l2_dist, int_h_alpha_sq_dist
  std::vector<Verdict> verdicts;
};

WeakResult weak_convergence_experiment(const Field& u0, const Control& v_base,
                                       const Model& model, const SolverParams& params,
                                       const WeakParams& p);

// Stability of path moments in the noise intensity: the sampled mean of
//   sup_t ||u||^2 + int ||u||_{H^alpha}^2 dt + int ||u||_{Lp}^p dt
// over (random R-ball controls) x (noise), for each eps in the list; the
// max/min ratio across eps must stay under the bound.
struct MomentParams {
  std::vector<double> eps_list = {0.01, 0.1, 0.99};
  double energy = 1.0;
  int samples = 64;
  double ratio_bound = 2.0;
};

struct MomentResult {
  Table table; // eps, mean_sup_l2_sq, mean_int_h_alpha_sq, mean_int_lp, mean_total
  std::vector<Verdict> verdicts;
  double ratio = 0.0;
  int excluded = 0;
};

MomentResult moment_bound_experiment(const Field& u0, const Model& model,
                                     const SolverParams& params, const MomentParams& p,
                                     std::uint64_t seed, int threads);

// Shared helper: Gaussian control sample rescaled so its energy lands
// uniformly in the ball of energy R^2 (counter-addressed by sample index).
Control sample_ball_control(int steps, int modes, double dt, double energy_radius,
                            std::uint64_t seed, std::uint64_t sample);

} // namespace fsrd
