#pragma once

#include <cmath>
#include <numbers>

// Fractional Sobolev seminorm of the Gaussian bump u(x) = exp(-c x^2) on the
// whole line, computed from the singular-integral form
//   |u|^2 = (K(1,alpha)/2) intint |u(x) - u(y)|^2 / |x - y|^{1+2 alpha} dx dy,
//   K(1,alpha) = alpha 4^alpha Gamma(1/2 + alpha) / (sqrt(pi) Gamma(1 - alpha)),
// with no Fourier transform anywhere in the evaluation. Writing
//   g(r) = int |u(x+r) - u(x)|^2 dx = 2 sqrt(pi/(2c)) (1 - exp(-c r^2 / 2)),
// the double integral collapses to 2 int_0^inf g(r) r^{-1-2 alpha} dr, split
// into an analytic near part (g ~ ||u'||^2 r^2), a midpoint-rule middle part,
// and an analytic far tail (g ~ 2 ||u||^2).
namespace oracle {

inline double gaussian_seminorm_sq_quadrature(double c, double alpha) {
  const double pi = std::numbers::pi;
  const double K = alpha * std::pow(4.0, alpha) * std::tgamma(0.5 + alpha) /
                   (std::sqrt(pi) * std::tgamma(1.0 - alpha));
  const double norm_sq = std::sqrt(pi / (2.0 * c));      // ||u||^2
  const double grad_sq = std::sqrt(pi * c / 2.0);        // ||u'||^2
  const auto g = [&](double r) { return 2.0 * norm_sq * (1.0 - std::exp(-0.5 * c * r * r)); };

  const double eta = 1e-4;
  const double R = 12.0;
  double mid = 0.0;
  // Log-spaced midpoint panels resolve the r^{-1-2 alpha} weight near eta.
  const int panels = 200000;
  const double ratio = std::log(R / eta) / panels;
  for (int i = 0; i < panels; ++i) {
    const double r_lo = eta * std::exp(i * ratio);
    const double r_hi = eta * std::exp((i + 1) * ratio);
    const double r = 0.5 * (r_lo + r_hi);
    mid += g(r) * std::pow(r, -1.0 - 2.0 * alpha) * (r_hi - r_lo);
  }
  const double near = grad_sq * std::pow(eta, 2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
  const double far = 2.0 * norm_sq * std::pow(R, -2.0 * alpha) / (2.0 * alpha);
  return (K / 2.0) * 2.0 * (near + mid + far);
}

// Exact value of the same quantity,
//   |u|^2 = Gamma(alpha + 1/2) (2c)^{alpha - 1/2},
// from int_0^inf (1 - e^{-l r^2}) r^{-1-2a} dr = Gamma(1-a) l^a / (2a). Used
// to certify the quadrature itself.
inline double gaussian_seminorm_sq_exact(double c, double alpha) {
  return std::tgamma(alpha + 0.5) * std::pow(2.0 * c, alpha - 0.5);
}

} // namespace oracle
