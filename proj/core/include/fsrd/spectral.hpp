#pragma once

#include <vector>

#include "fsrd/field.hpp"

namespace fsrd {

// Discrete Fourier transform pair, unitary in both directions so that
// sum |f_i|^2 == sum |c_j|^2 exactly up to rounding. Grids are restricted to
// power-of-two sizes and the transform path is a fixed radix-2 network, so
// results are bit-reproducible regardless of call site or thread count.
SpectralField forward(const Field& f);
Field inverse(const SpectralField& c);

// L^2(box) inner product and norms with the h^dim quadrature weight.
double inner(const Field& a, const Field& b);
double l2_norm(const Field& f);
// ||f||_{L^p}^p quadrature; p >= 1.
double lp_norm_pow(const Field& f, double p);
double lp_norm(const Field& f, double p);

// Squared wavenumber |xi|^2 for every flat coefficient index; xi_d = pi j_d / L
// with j_d the signed frequency. Cached by callers that apply many multipliers.
std::vector<double> wavenumber_sq(const Grid& g);

// Fractional Dirichlet energy ||(-Lap)^{alpha/2} f||^2 and the full norm
// sqrt(||f||^2 + energy). alpha must lie in (0, 1].
double h_alpha_seminorm_sq(const Field& f, double alpha);
double h_alpha_norm(const Field& f, double alpha);
double h_alpha_seminorm_sq(const SpectralField& c, double alpha);

// Spectral fractional Laplacian: coefficient multiplier |xi|^{2 alpha}.
Field frac_laplacian(const Field& f, double alpha);

// Semigroup e^{-t (-Lap)^alpha} applied spectrally; t >= 0.
Field semigroup(const Field& f, double alpha, double t);

// Per-coefficient multiplier exp(-t |xi|^{2 alpha}), for callers that apply
// the same semigroup step many times.
std::vector<double> semigroup_multiplier(const Grid& g, double alpha, double t);

// Apply a cached real multiplier to spectral coefficients in place.
void apply_multiplier(SpectralField& c, const std::vector<double>& m);

// Mass of f outside the ball of radius m: h^dim * sum_{|x_i| >= m} f_i^2.
// Requires 0 < m < half_width so the measured region is inside the box.
double tail_mass(const Field& f, double m);

// Radial C^2 cutoff theta(|x| / m): 0 inside radius m/2, 1 outside radius m,
// monotone polynomial bridge in between. Same m validity as tail_mass.
Field smooth_cutoff(const Grid& g, double m);

} // namespace fsrd
