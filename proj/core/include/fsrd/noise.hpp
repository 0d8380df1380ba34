#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fsrd/field.hpp"

namespace fsrd {

// Multiplicative noise acting mode-by-mode on an l2 sequence space:
//   sigma_k(t, x, s) = m(t) [ sigma1_k(x) + kappa(x) sigma2_k(s) ]
// with finitely many active modes. sigma2 families: none (additive noise),
// linear c_k s, bounded c_k sin(s). Per-mode constants declare the envelopes
//   |sigma2_k(s1) - sigma2_k(s2)| <= alpha_k |s1 - s2|
//   |sigma2_k(s)|                 <= beta_k + gamma_k |s|
// and the checks below measure the slack of the induced Hilbert-Schmidt
// bounds on sampled fields.
enum class Sigma2Family { None, Linear, Bounded };

struct NoiseSpec {
  int modes = 0;
  std::vector<Field> sigma1;       // one profile per mode, common grid
  Field kappa;                      // spatial envelope of the state-dependent part
  Sigma2Family family = Sigma2Family::None;
  std::vector<double> c;            // per-mode sigma2 coefficient
  std::vector<double> alpha_lip;    // alpha_k
  std::vector<double> beta_bound;   // beta_k
  std::vector<double> gamma_growth; // gamma_k
  std::function<double(double)> time_mod; // m(t); empty means identically 1

  const Grid& grid() const { return kappa.grid; }
  double modulation(double t) const { return time_mod ? time_mod(t) : 1.0; }
  double sigma2(int mode, double s) const;
  double sigma2_deriv(int mode, double s) const;
  void validate() const; // throws InvalidArgument on inconsistent shape
};

// Shipped profile families for sigma1. EnvelopedTrig localizes each mode with
// a Gaussian envelope (used on wide boxes where solutions must stay inside);
// PureMode uses plain trigonometric modes, which are exact eigenfunctions of
// the fractional Laplacian. Profile k alternates cos/sin at frequency
// ceil(k/2); every profile is normalized to unit L2 then scaled by
// amp * k^{-amp_decay}.
struct NoiseBuildParams {
  int modes = 1;
  std::string profile = "pure-mode"; // "pure-mode" | "enveloped-trig"
  double amp = 0.3;
  double amp_decay = 1.0;
  double envelope_width = 1.0;
  Sigma2Family family = Sigma2Family::None;
  double c_amp = 0.0;
  double c_decay = 1.0;
  double kappa_amp = 0.0;
  double kappa_width = 1.0;
};

NoiseSpec make_noise(const Grid& g, const NoiseBuildParams& p);

// sum_k v_k sigma_k(t, x, u(x)); v must have one entry per mode.
Field apply_sigma(const NoiseSpec& n, double t, const Field& u, std::span<const double> v);

// out_k = <sigma_k(t, x, u(x)), q>_{L2}; adjoint of v -> apply_sigma(..., v).
void adjoint_sigma(const NoiseSpec& n, double t, const Field& u, const Field& q,
                   std::span<double> out);

// Pointwise state derivative of the control-to-field map:
// sum_k v_k d sigma_k / ds (t, x, u(x)) = m(t) kappa(x) sum_k v_k sigma2_k'(u(x)).
Field sigma_state_deriv(const NoiseSpec& n, double t, const Field& u,
                        std::span<const double> v);

// Hilbert-Schmidt norm squared sum_k ||sigma_k(t, ., u)||^2.
double hs_norm_sq(const NoiseSpec& n, double t, const Field& u);

struct NoiseConstantSums {
  double alpha_sq = 0.0, beta_sq = 0.0, gamma_sq = 0.0;
};
NoiseConstantSums sum_sq_constants(const NoiseSpec& n);

// Slack of the declared growth bound on one field:
//   2 sum_k ||sigma1_k||^2 + L1 (1 + ||u||^2) - ||sigma(t,u)||^2_HS,  >= 0,
// where L1 = 4 ||kappa||^2 sum beta_k^2 + 4 sup|kappa|^2 sum gamma_k^2.
double growth_gap(const NoiseSpec& n, double t, const Field& u);

// Slack of the declared Lipschitz bound on one pair:
//   sup|kappa|^2 sum alpha_k^2 ||u1-u2||^2 - ||sigma(t,u1)-sigma(t,u2)||^2_HS.
double lipschitz_gap(const NoiseSpec& n, double t, const Field& u1, const Field& u2);

struct NoiseCheckEntry {
  std::string name;
  bool pass;
  double margin;
  std::string note;
};

struct NoiseCheckReport {
  std::vector<NoiseCheckEntry> entries;
  NoiseConstantSums sums;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

// Evaluates the growth and Lipschitz gaps on pseudo-random sampled fields
// (counter-seeded, amplitude `field_amp`) and reports worst margins plus the
// constant sums.
NoiseCheckReport check_noise(const NoiseSpec& n, int samples, double field_amp,
                             std::uint64_t seed);

} // namespace fsrd
