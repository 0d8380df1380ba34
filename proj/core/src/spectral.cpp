#include "fsrd/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace fsrd {

namespace {

// Twiddle table exp(sign * 2 pi i k / n) for k < n/2, each entry from
// std::polar so no rotation error accumulates across stages.
std::vector<std::complex<double>> twiddle_table(std::size_t n, double sign) {
  std::vector<std::complex<double>> tw(n / 2);
  const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    tw[k] = std::polar(1.0, base * static_cast<double>(k));
  return tw;
}

// Tables are immutable once built, so they are cached per (log2 n, sign) and
// shared across threads. Sizes are powers of two up to 2^30 per dimension.
const std::vector<std::complex<double>>& cached_twiddle(std::size_t n, double sign) {
  constexpr int kMaxLog2 = 31;
  static std::once_flag flags[2][kMaxLog2];
  static std::vector<std::complex<double>> tables[2][kMaxLog2];
  int log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  const int si = sign < 0.0 ? 0 : 1;
  std::call_once(flags[si][log2n], [&] { tables[si][log2n] = twiddle_table(n, sign); });
  return tables[si][log2n];
}

// In-place radix-2 transform of a contiguous line, n a power of two.
void fft_pow2(std::complex<double>* a, std::size_t n,
              const std::vector<std::complex<double>>& tw) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = tw[k * step];
        const std::complex<double> u = a[base + k];
        const std::complex<double> t = w * a[base + k + half];
        a[base + k] = u + t;
        a[base + k + half] = u - t;
      }
    }
  }
}

// Transform every line of `data` along one axis of the dim-cube.
void transform_axis(std::vector<std::complex<double>>& data, int dim,
                    std::size_t n, int axis,
                    const std::vector<std::complex<double>>& tw) {
  std::size_t stride = 1;
  for (int d = dim - 1; d > axis; --d) stride *= n;
  const std::size_t block = stride * n;
  std::vector<std::complex<double>> line(n);
  for (std::size_t start = 0; start < data.size(); start += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (std::size_t i = 0; i < n; ++i) line[i] = data[start + off + i * stride];
      fft_pow2(line.data(), n, tw);
      for (std::size_t i = 0; i < n; ++i) data[start + off + i * stride] = line[i];
    }
  }
}

void transform_all(std::vector<std::complex<double>>& data, const Grid& g, double sign) {
  const auto n = static_cast<std::size_t>(g.points());
  const auto& tw = cached_twiddle(n, sign);
  for (int axis = 0; axis < g.dim(); ++axis) transform_axis(data, g.dim(), n, axis, tw);
  const double s = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (auto& z : data) z *= s;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidArgument("fractional order alpha must lie in (0, 1]");
}

void require_radius(const Grid& g, double m) {
  if (!(m > 0.0) || m >= g.half_width())
    throw InvalidArgument("radius must satisfy 0 < m < half_width");
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteError(what);
  return v;
}

} // namespace

SpectralField forward(const Field& f) {
  SpectralField out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out.coeffs[i] = f.values[i];
  transform_all(out.coeffs, f.grid, -1.0);
  return out;
}

Field inverse(const SpectralField& c) {
  std::vector<std::complex<double>> work = c.coeffs;
  transform_all(work, c.grid, 1.0);
  Field out(c.grid);
  for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
  return out;
}

double inner(const Field& a, const Field& b) {
  check_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return checked(s * a.grid.cell_volume(), "inner product is not finite");
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(checked(s * f.grid.cell_volume(), "L2 norm is not finite"));
}

double lp_norm_pow(const Field& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("Lp exponent must be >= 1");
  double s = 0.0;
  const double pr = std::round(p);
  if (p == pr && pr <= 8.0) {
    const int ip = static_cast<int>(pr);
    for (double v : f.values) {
      double a = std::fabs(v), t = 1.0;
      for (int k = 0; k < ip; ++k) t *= a;
      s += t;
    }
  } else {
    for (double v : f.values) s += std::pow(std::fabs(v), p);
  }
  return checked(s * f.grid.cell_volume(), "Lp norm is not finite");
}

double lp_norm(const Field& f, double p) {
  return std::pow(lp_norm_pow(f, p), 1.0 / p);
}

std::vector<double> wavenumber_sq(const Grid& g) {
  const auto n = static_cast<std::size_t>(g.points());
  const double dxi = std::numbers::pi / g.half_width();
  std::vector<double> axis(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<double>(j < n / 2 ? static_cast<long>(j)
                                                  : static_cast<long>(j) - g.points());
    axis[j] = (dxi * sj) * (dxi * sj);
  }
  std::vector<double> out(g.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rest = flat;
    double k2 = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      k2 += axis[rest % n];
      rest /= n;
    }
    out[flat] = k2;
  }
  return out;
}

double h_alpha_seminorm_sq(const SpectralField& c, double alpha) {
  require_alpha(alpha);
  const auto k2 = wavenumber_sq(c.grid);
  double s = 0.0;
  if (alpha == 1.0) {
    for (std::size_t i = 0; i < c.size(); ++i) s += k2[i] * std::norm(c.coeffs[i]);
  } else {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (k2[i] > 0.0) s += std::pow(k2[i], alpha) * std::norm(c.coeffs[i]);
  }
  return checked(s * c.grid.cell_volume(), "H^alpha seminorm is not finite");
}

double h_alpha_seminorm_sq(const Field& f, double alpha) {
  return h_alpha_seminorm_sq(forward(f), alpha);
}

double h_alpha_norm(const Field& f, double alpha) {
  const auto c = forward(f);
  double l2 = 0.0;
  for (const auto& z : c.coeffs) l2 += std::norm(z);
  l2 *= f.grid.cell_volume();
  return std::sqrt(checked(l2, "H^alpha norm is not finite") + h_alpha_seminorm_sq(c, alpha));
}

Field frac_laplacian(const Field& f, double alpha) {
  require_alpha(alpha);
  auto c = forward(f);
  const auto k2 = wavenumber_sq(f.grid);
  if (alpha == 1.0) {
    for (std::size_t i = 0; i < c.size(); ++i) c.coeffs[i] *= k2[i];
  } else {
    for (std::size_t i = 0; i < c.size(); ++i)
      c.coeffs[i] *= k2[i] > 0.0 ? std::pow(k2[i], alpha) : 0.0;
  }
  return inverse(c);
}

std::vector<double> semigroup_multiplier(const Grid& g, double alpha, double t) {
  require_alpha(alpha);
  if (!(t >= 0.0)) throw InvalidArgument("semigroup time must be >= 0");
  const auto k2 = wavenumber_sq(g);
  std::vector<double> m(k2.size());
  if (alpha == 1.0) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-t * k2[i]);
  } else {
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = k2[i] > 0.0 ? std::exp(-t * std::pow(k2[i], alpha)) : 1.0;
  }
  return m;
}

void apply_multiplier(SpectralField& c, const std::vector<double>& m) {
  if (m.size() != c.size())
    throw InvalidArgument("multiplier length does not match coefficient count");
  for (std::size_t i = 0; i < c.size(); ++i) c.coeffs[i] *= m[i];
}

Field semigroup(const Field& f, double alpha, double t) {
  auto c = forward(f);
  apply_multiplier(c, semigroup_multiplier(f.grid, alpha, t));
  return inverse(c);
}

double tail_mass(const Field& f, double m) {
  require_radius(f.grid, m);
  const double m2 = m * m;
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.grid.radius_sq(i) >= m2) s += f[i] * f[i];
  return checked(s * f.grid.cell_volume(), "tail mass is not finite");
}

Field smooth_cutoff(const Grid& g, double m) {
  require_radius(g, m);
  Field out(g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double rho = std::sqrt(g.radius_sq(i)) / m;
    if (rho <= 0.5) {
      out[i] = 0.0;
    } else if (rho >= 1.0) {
      out[i] = 1.0;
    } else {
      // Quintic bridge with matching value and first two derivatives at both
      // ends: s in [0,1], theta = 1 - (1-s)^3 (1 + 3 s + 6 s^2).
      const double s = 2.0 * rho - 1.0;
      const double q = 1.0 - s;
      out[i] = 1.0 - q * q * q * (1.0 + 3.0 * s + 6.0 * s * s);
    }
  }
  return out;
}

} // namespace fsrd
