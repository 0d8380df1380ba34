#pragma once

#include <optional>
#include <span>

#include "fsrd/spde.hpp"

namespace fsrd {

// Rare-event definitions evaluated on a simulated path.
enum class EventKind { TerminalThreshold, SupNormTubeExit, TerminalBall };

struct EventSpec {
  EventKind kind;
  Field probe;                  // TerminalThreshold: <u(T), probe> >= threshold
  double threshold = 0.0;
  double radius = 0.0;          // TerminalBall / SupNormTubeExit
  std::vector<Field> reference; // SupNormTubeExit: steps + 1 fields

  static EventSpec terminal_threshold(Field probe, double threshold);
  static EventSpec terminal_ball(Field center, double radius);
  static EventSpec tube_exit(std::vector<Field> reference, double radius);

  bool evaluate(const Trajectory& t) const;
};

struct MCEstimate {
  double eps = 0.0;
  long long samples = 0;
  long long hits = 0;
  double p_hat = 0.0;
  double log_p = 0.0;      // log p_hat; -inf when no hits
  double se = 0.0;         // absolute standard error of p_hat
  double rel_se = 0.0;     // se / p_hat (CI half-width on log p is 1.96 rel_se)
  double ess = 0.0;        // effective sample size: samples for naive; for importance
                           // sampling the Kish size (sum w)^2 / (sum w^2) of the HIT
                           // weights, i.e. the effective number of hits behind p_hat.
                           // Raw-weight Kish would collapse like exp(-2 action / eps)
                           // even when the tail estimate itself is tight.
  double mean_weight = 1.0;    // importance sampling: sample mean of the weights
  bool zero_hits = false;
  double log_p_upper = 0.0;    // one-sided bound log(1/N), meaningful when zero_hits
};

// Plain Monte Carlo over `n` trajectories of simulate_spde; trajectory i uses
// NoiseStream(seed, i). Deterministic for fixed (seed, n) at any thread count.
MCEstimate estimate_naive(const EventSpec& event, double eps, long long n,
                          const Field& u0, const Model& model, const SolverParams& params,
                          std::uint64_t seed, int threads);

// Importance sampling under the measure tilted along `shift`: trajectories
// from simulate_shifted, weights exp(log_weight), estimator
// p_hat = (1/n) sum 1_event exp(log_weight). Weight reduction happens in
// shifted log space, so exponents far below double range are safe.
MCEstimate estimate_is(const EventSpec& event, double eps, const Control& shift,
                       long long n, const Field& u0, const Model& model,
                       const SolverParams& params, std::uint64_t seed, int threads);

struct SweepRow {
  MCEstimate est;
  double neg_eps_log_p = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool included = false; // enters the fit: finite, ess above the floor
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = intercept + slope x; nullopt for fewer than two points.
std::optional<LinearFit> fit_linear(std::span<const double> x, std::span<const double> y);

struct SweepResult {
  std::vector<SweepRow> rows;
  int n_included = 0;
  std::optional<LinearFit> fit; // of -eps log p_hat against eps
  double shift_action = 0.0;    // action of the importance-sampling control
  double rel_gap = 0.0;         // (fit intercept - shift_action) / shift_action
};

// Importance-sampled estimates across an eps grid plus the small-eps linear
// extrapolation of -eps log p_hat. Rows with too few effective samples are
// reported but excluded from the fit.
SweepResult ldp_sweep(const EventSpec& event, std::span<const double> eps_list,
                      const Control& shift, long long n, const Field& u0,
                      const Model& model, const SolverParams& params, std::uint64_t seed,
                      int threads, double ess_min = 10.0);

} // namespace fsrd
