#include "fsrd/mc.hpp"

#include <cmath>
#include <limits>

#include "fsrd/parallel.hpp"
#include "fsrd/spectral.hpp"

namespace fsrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_event(const EventSpec& e, const Field& u0, const SolverParams& params) {
  switch (e.kind) {
    case EventKind::TerminalThreshold:
      if (e.probe.grid != u0.grid) throw InvalidArgument("event probe grid != state grid");
      break;
    case EventKind::TerminalBall:
      if (e.probe.grid != u0.grid) throw InvalidArgument("event center grid != state grid");
      if (!(e.radius > 0.0)) throw InvalidArgument("event ball radius must be positive");
      break;
    case EventKind::SupNormTubeExit:
      if (e.reference.size() != static_cast<std::size_t>(params.steps) + 1)
        throw InvalidArgument("event reference path must have steps + 1 fields");
      for (const auto& f : e.reference)
        if (f.grid != u0.grid) throw InvalidArgument("event reference grid != state grid");
      if (!(e.radius > 0.0)) throw InvalidArgument("event tube radius must be positive");
      break;
  }
}

} // namespace

EventSpec EventSpec::terminal_threshold(Field probe, double threshold) {
  EventSpec e{EventKind::TerminalThreshold, std::move(probe)};
  e.threshold = threshold;
  return e;
}

EventSpec EventSpec::terminal_ball(Field center, double radius) {
  EventSpec e{EventKind::TerminalBall, std::move(center)};
  e.radius = radius;
  return e;
}

EventSpec EventSpec::tube_exit(std::vector<Field> reference, double radius) {
  if (reference.empty()) throw InvalidArgument("tube event needs a reference path");
  EventSpec e{EventKind::SupNormTubeExit, reference.front()};
  e.reference = std::move(reference);
  e.radius = radius;
  return e;
}

bool EventSpec::evaluate(const Trajectory& t) const {
  switch (kind) {
    case EventKind::TerminalThreshold:
      return inner(t.terminal(), probe) >= threshold;
    case EventKind::TerminalBall: {
      Field d = t.terminal();
      axpy(d, -1.0, probe);
      return l2_norm(d) <= radius;
    }
    case EventKind::SupNormTubeExit: {
      for (std::size_t m = 0; m < t.fields.size(); ++m) {
        Field d = t.fields[m];
        axpy(d, -1.0, reference[m]);
        if (l2_norm(d) >= radius) return true;
      }
      return false;
    }
  }
  return false;
}

MCEstimate estimate_naive(const EventSpec& event, double eps, long long n,
                          const Field& u0, const Model& model, const SolverParams& params,
                          std::uint64_t seed, int threads) {
  if (n < 1) throw InvalidArgument("estimator needs at least one sample");
  params.validate();
  validate_event(event, u0, params);

  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const NoiseStream stream(seed, static_cast<std::uint64_t>(i));
    const Trajectory t = simulate_spde(u0, eps, model, params, stream);
    hit[i] = event.evaluate(t) ? 1 : 0;
  });

  long long hits = 0;
  for (char h : hit) hits += h;

  MCEstimate est;
  est.eps = eps;
  est.samples = n;
  est.hits = hits;
  est.ess = static_cast<double>(n);
  est.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  if (hits == 0) {
    est.zero_hits = true;
    est.log_p = -kInf;
    est.log_p_upper = -std::log(static_cast<double>(n));
    est.se = 0.0;
    est.rel_se = kInf;
  } else {
    est.log_p = std::log(est.p_hat);
    est.se = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
    est.rel_se = est.se / est.p_hat;
    est.log_p_upper = est.log_p + 1.96 * est.rel_se;
  }
  return est;
}

MCEstimate estimate_is(const EventSpec& event, double eps, const Control& shift,
                       long long n, const Field& u0, const Model& model,
                       const SolverParams& params, std::uint64_t seed, int threads) {
  if (n < 1) throw InvalidArgument("estimator needs at least one sample");
  params.validate();
  validate_event(event, u0, params);

  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  std::vector<double> logw(static_cast<std::size_t>(n), 0.0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const NoiseStream stream(seed, static_cast<std::uint64_t>(i));
    const Trajectory t = simulate_shifted(u0, eps, shift, model, params, stream);
    hit[i] = event.evaluate(t) ? 1 : 0;
    logw[i] = *t.log_weight;
  });

  // All weight arithmetic happens relative to the largest exponent so that
  // exponents of order -1/eps never underflow.
  double amax = -kInf;
  for (double lw : logw) amax = std::max(amax, lw);
  if (!std::isfinite(amax)) throw NonFiniteError("importance weights are degenerate");

  long long hits = 0;
  double s1 = 0.0, s2 = 0.0;   // scaled hit-weight sums
  double w1 = 0.0, w2 = 0.0;   // scaled raw-weight sums
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(logw[i] - amax);
    w1 += w;
    w2 += w * w;
    if (hit[i]) {
      ++hits;
      s1 += w;
      s2 += w * w;
    }
  }

  MCEstimate est;
  est.eps = eps;
  est.samples = n;
  est.hits = hits;
  est.ess = s2 > 0.0 ? s1 * s1 / s2 : 0.0;
  est.mean_weight = std::exp(amax + std::log(w1 / static_cast<double>(n)));
  if (hits == 0) {
    est.zero_hits = true;
    est.p_hat = 0.0;
    est.log_p = -kInf;
    est.log_p_upper = -std::log(static_cast<double>(n));
    est.se = 0.0;
    est.rel_se = kInf;
    return est;
  }
  const double nd = static_cast<double>(n);
  est.log_p = amax + std::log(s1 / nd);
  est.p_hat = std::exp(est.log_p);
  const double var_scaled = std::max(0.0, (s2 - s1 * s1 / nd) / std::max(1.0, nd - 1.0));
  est.rel_se = std::sqrt(var_scaled / nd) / (s1 / nd);
  est.se = est.p_hat * est.rel_se;
  est.log_p_upper = est.log_p + 1.96 * est.rel_se;
  return est;
}

std::optional<LinearFit> fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit needs matching x and y lengths");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

SweepResult ldp_sweep(const EventSpec& event, std::span<const double> eps_list,
                      const Control& shift, long long n, const Field& u0,
                      const Model& model, const SolverParams& params, std::uint64_t seed,
                      int threads, double ess_min) {
  if (eps_list.empty()) throw InvalidArgument("sweep needs at least one eps");
  SweepResult out;
  out.shift_action = shift.action();
  for (double eps : eps_list) {
    SweepRow row;
    row.est = estimate_is(event, eps, shift, n, u0, model, params, seed, threads);
    if (!row.est.zero_hits) {
      row.neg_eps_log_p = -eps * row.est.log_p;
      row.ci_lo = -eps * (row.est.log_p + 1.96 * row.est.rel_se);
      row.ci_hi = -eps * (row.est.log_p - 1.96 * row.est.rel_se);
      row.included = row.est.ess >= ess_min && std::isfinite(row.neg_eps_log_p);
    } else {
      row.neg_eps_log_p = kInf;
      row.ci_lo = -eps * row.est.log_p_upper;
      row.ci_hi = kInf;
      row.included = false;
    }
    out.rows.push_back(std::move(row));
  }

  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    if (!r.included) continue;
    xs.push_back(r.est.eps);
    ys.push_back(r.neg_eps_log_p);
  }
  out.n_included = static_cast<int>(xs.size());
  out.fit = fit_linear(xs, ys);
  if (out.fit && out.shift_action != 0.0)
    out.rel_gap = (out.fit->intercept - out.shift_action) / out.shift_action;
  return out;
}

} // namespace fsrd
