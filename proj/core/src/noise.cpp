#include "fsrd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsrd/rng.hpp"
#include "fsrd/spectral.hpp"

namespace fsrd {

namespace {

constexpr std::uint32_t kNoiseCheckDomain = 2;

double sup_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

} // namespace

double NoiseSpec::sigma2(int mode, double s) const {
  switch (family) {
    case Sigma2Family::None: return 0.0;
    case Sigma2Family::Linear: return c[static_cast<std::size_t>(mode)] * s;
    case Sigma2Family::Bounded: return c[static_cast<std::size_t>(mode)] * std::sin(s);
  }
  return 0.0;
}

double NoiseSpec::sigma2_deriv(int mode, double s) const {
  switch (family) {
    case Sigma2Family::None: return 0.0;
    case Sigma2Family::Linear: return c[static_cast<std::size_t>(mode)];
    case Sigma2Family::Bounded: return c[static_cast<std::size_t>(mode)] * std::cos(s);
  }
  return 0.0;
}

void NoiseSpec::validate() const {
  if (modes < 1) throw InvalidArgument("noise needs at least one mode");
  const auto k = static_cast<std::size_t>(modes);
  if (sigma1.size() != k) throw InvalidArgument("sigma1 profile count != modes");
  for (const auto& f : sigma1)
    if (f.grid != kappa.grid) throw InvalidArgument("sigma1 profile grid != kappa grid");
  if (family != Sigma2Family::None && c.size() != k)
    throw InvalidArgument("sigma2 coefficient count != modes");
  if (alpha_lip.size() != k || beta_bound.size() != k || gamma_growth.size() != k)
    throw InvalidArgument("noise constant vectors must have one entry per mode");
}

NoiseSpec make_noise(const Grid& g, const NoiseBuildParams& p) {
  if (p.modes < 1) throw InvalidArgument("noise needs at least one mode");
  if (p.profile != "pure-mode" && p.profile != "enveloped-trig")
    throw InvalidArgument("unknown noise profile: " + p.profile);
  if (p.family != Sigma2Family::None && p.kappa_amp == 0.0)
    throw InvalidArgument("state-dependent noise needs a nonzero kappa amplitude");

  NoiseSpec n{.modes = p.modes,
              .sigma1 = {},
              .kappa = Field(g),
              .family = p.family,
              .c = {},
              .alpha_lip = {},
              .beta_bound = {},
              .gamma_growth = {},
              .time_mod = {}};

  const double L = g.half_width();
  for (int k = 1; k <= p.modes; ++k) {
    const double freq = std::ceil(k / 2.0) * std::numbers::pi / L;
    const bool use_cos = (k % 2) == 1;
    Field prof = sample(g, [&](const std::array<double, 3>& x) {
      const double trig = use_cos ? std::cos(freq * x[0]) : std::sin(freq * x[0]);
      if (p.profile == "pure-mode") return trig;
      double r2 = 0.0;
      for (int d = 0; d < g.dim(); ++d) r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      return trig * std::exp(-r2 / (p.envelope_width * p.envelope_width));
    });
    const double nrm = l2_norm(prof);
    if (!(nrm > 0.0)) throw InvalidArgument("degenerate noise profile");
    const double ak = p.amp * std::pow(static_cast<double>(k), -p.amp_decay);
    scale(prof, ak / nrm);
    n.sigma1.push_back(std::move(prof));

    const double ck = p.c_amp * std::pow(static_cast<double>(k), -p.c_decay);
    n.c.push_back(ck);
    switch (p.family) {
      case Sigma2Family::None:
        n.alpha_lip.push_back(0.0);
        n.beta_bound.push_back(0.0);
        n.gamma_growth.push_back(0.0);
        break;
      case Sigma2Family::Linear:
        n.alpha_lip.push_back(std::fabs(ck));
        n.beta_bound.push_back(0.0);
        n.gamma_growth.push_back(std::fabs(ck));
        break;
      case Sigma2Family::Bounded:
        n.alpha_lip.push_back(std::fabs(ck));
        n.beta_bound.push_back(std::fabs(ck));
        n.gamma_growth.push_back(0.0);
        break;
    }
  }

  if (p.kappa_amp != 0.0) {
    n.kappa = sample(g, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int d = 0; d < g.dim(); ++d) r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      return p.kappa_amp * std::exp(-r2 / (p.kappa_width * p.kappa_width));
    });
  }
  n.validate();
  return n;
}

Field apply_sigma(const NoiseSpec& n, double t, const Field& u, std::span<const double> v) {
  n.validate();
  check_same_grid(u, n.kappa);
  if (v.size() != static_cast<std::size_t>(n.modes))
    throw InvalidArgument("control slice length != noise modes");
  const double mt = n.modulation(t);
  Field out(u.grid);
  for (int k = 0; k < n.modes; ++k) {
    const double w = mt * v[static_cast<std::size_t>(k)];
    if (w == 0.0) continue;
    const Field& s1 = n.sigma1[static_cast<std::size_t>(k)];
    if (n.family == Sigma2Family::None) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * s1[i];
    } else {
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += w * (s1[i] + n.kappa[i] * n.sigma2(k, u[i]));
    }
  }
  return out;
}

void adjoint_sigma(const NoiseSpec& n, double t, const Field& u, const Field& q,
                   std::span<double> out) {
  n.validate();
  check_same_grid(u, n.kappa);
  check_same_grid(q, n.kappa);
  if (out.size() != static_cast<std::size_t>(n.modes))
    throw InvalidArgument("adjoint output length != noise modes");
  const double mt = n.modulation(t);
  const double vol = u.grid.cell_volume();
  for (int k = 0; k < n.modes; ++k) {
    const Field& s1 = n.sigma1[static_cast<std::size_t>(k)];
    double acc = 0.0;
    if (n.family == Sigma2Family::None) {
      for (std::size_t i = 0; i < u.size(); ++i) acc += s1[i] * q[i];
    } else {
      for (std::size_t i = 0; i < u.size(); ++i)
        acc += (s1[i] + n.kappa[i] * n.sigma2(k, u[i])) * q[i];
    }
    out[static_cast<std::size_t>(k)] = mt * vol * acc;
  }
}

Field sigma_state_deriv(const NoiseSpec& n, double t, const Field& u,
                        std::span<const double> v) {
  n.validate();
  check_same_grid(u, n.kappa);
  if (v.size() != static_cast<std::size_t>(n.modes))
    throw InvalidArgument("control slice length != noise modes");
  Field out(u.grid);
  if (n.family == Sigma2Family::None) return out;
  const double mt = n.modulation(t);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < n.modes; ++k)
      acc += v[static_cast<std::size_t>(k)] * n.sigma2_deriv(k, u[i]);
    out[i] = mt * n.kappa[i] * acc;
  }
  return out;
}

double hs_norm_sq(const NoiseSpec& n, double t, const Field& u) {
  n.validate();
  check_same_grid(u, n.kappa);
  const double mt = n.modulation(t);
  const double vol = u.grid.cell_volume();
  double total = 0.0;
  for (int k = 0; k < n.modes; ++k) {
    const Field& s1 = n.sigma1[static_cast<std::size_t>(k)];
    double acc = 0.0;
    if (n.family == Sigma2Family::None) {
      for (std::size_t i = 0; i < u.size(); ++i) acc += s1[i] * s1[i];
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = s1[i] + n.kappa[i] * n.sigma2(k, u[i]);
        acc += s * s;
      }
    }
    total += mt * mt * vol * acc;
  }
  if (!std::isfinite(total)) throw NonFiniteError("Hilbert-Schmidt norm is not finite");
  return total;
}

NoiseConstantSums sum_sq_constants(const NoiseSpec& n) {
  NoiseConstantSums s;
  for (int k = 0; k < n.modes; ++k) {
    const auto i = static_cast<std::size_t>(k);
    s.alpha_sq += n.alpha_lip[i] * n.alpha_lip[i];
    s.beta_sq += n.beta_bound[i] * n.beta_bound[i];
    s.gamma_sq += n.gamma_growth[i] * n.gamma_growth[i];
  }
  return s;
}

double growth_gap(const NoiseSpec& n, double t, const Field& u) {
  const auto sums = sum_sq_constants(n);
  const double k2 = l2_norm(n.kappa) * l2_norm(n.kappa);
  const double ksup = sup_abs(n.kappa);
  const double l1 = 4.0 * k2 * sums.beta_sq + 4.0 * ksup * ksup * sums.gamma_sq;
  double base = 0.0;
  for (const auto& s1 : n.sigma1) base += l2_norm(s1) * l2_norm(s1);
  const double un = l2_norm(u);
  return 2.0 * base + l1 * (1.0 + un * un) - hs_norm_sq(n, t, u);
}

double lipschitz_gap(const NoiseSpec& n, double t, const Field& u1, const Field& u2) {
  n.validate();
  check_same_grid(u1, u2);
  check_same_grid(u1, n.kappa);
  const auto sums = sum_sq_constants(n);
  const double ksup = sup_abs(n.kappa);
  const double mt = n.modulation(t);
  const double vol = u1.grid.cell_volume();
  double hs_diff = 0.0;
  for (int k = 0; k < n.modes; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
      const double dd = n.kappa[i] * (n.sigma2(k, u1[i]) - n.sigma2(k, u2[i]));
      acc += dd * dd;
    }
    hs_diff += mt * mt * vol * acc;
  }
  Field diff = u1;
  axpy(diff, -1.0, u2);
  const double dn = l2_norm(diff);
  return ksup * ksup * sums.alpha_sq * dn * dn - hs_diff;
}

NoiseCheckReport check_noise(const NoiseSpec& n, int samples, double field_amp,
                             std::uint64_t seed) {
  n.validate();
  if (samples < 1) throw InvalidArgument("noise check needs at least one sample");
  const Grid& g = n.grid();

  auto random_field = [&](std::uint64_t which) {
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = field_amp * counter_normal(seed, kNoiseCheckDomain, which, i, 0);
    return f;
  };

  double worst_growth = std::numeric_limits<double>::infinity();
  double worst_lip = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / samples;
    const Field u1 = random_field(2 * static_cast<std::uint64_t>(s));
    const Field u2 = random_field(2 * static_cast<std::uint64_t>(s) + 1);
    worst_growth = std::min(worst_growth, growth_gap(n, t, u1));
    worst_lip = std::min(worst_lip, lipschitz_gap(n, t, u1, u2));
  }

  NoiseCheckReport r;
  r.sums = sum_sq_constants(n);
  const double tol = 1e-9 * std::max(1.0, field_amp * field_amp);
  r.entries.push_back({"hs-growth-bound", worst_growth >= -tol, worst_growth,
                       "min declared-bound slack over sampled fields"});
  r.entries.push_back({"hs-lipschitz-bound", worst_lip >= -tol, worst_lip,
                       "min declared-bound slack over sampled pairs"});
  const double sum_all = r.sums.alpha_sq + r.sums.beta_sq + r.sums.gamma_sq;
  r.entries.push_back({"constant-summability", std::isfinite(sum_all), sum_all,
                       "sum of squared per-mode constants"});
  return r;
}

} // namespace fsrd
