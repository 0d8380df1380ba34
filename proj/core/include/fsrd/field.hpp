#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fsrd/grid.hpp"

namespace fsrd {

// Real scalar field sampled on a Grid, row-major flat storage.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw InvalidArgument("field value count does not match grid size");
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// Complex coefficient array produced by the forward transform; the entry at
// flat index j corresponds to the discrete frequency tuple obtained by
// mapping each per-dimension index j_d to j_d (j_d < N/2) or j_d - N.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;

  explicit SpectralField(const Grid& g)
      : grid(g), coeffs(g.size(), std::complex<double>(0.0, 0.0)) {}

  std::size_t size() const { return coeffs.size(); }
};

// Sample a function of position onto a grid.
inline Field sample(const Grid& g, const std::function<double(const std::array<double, 3>&)>& f) {
  Field out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.point(i));
  return out;
}

// Pointwise helpers used across the solvers. All require matching grids.
inline void check_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw InvalidArgument("fields live on different grids");
}

inline Field& axpy(Field& y, double a, const Field& x) {
  check_same_grid(y, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

inline Field& scale(Field& y, double a) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= a;
  return y;
}

} // namespace fsrd
