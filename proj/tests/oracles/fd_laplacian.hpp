#pragma once

#include <cstddef>
#include <vector>

// Centered second-difference Laplacian on a periodic 1-D grid, an operator
// built without any transform. Used to certify the alpha = 1 spectral path:
// the two agree to O(h^2) on smooth periodic data.
namespace oracle {

inline std::vector<double> fd_neg_laplacian_1d(const std::vector<double>& u, double h) {
  const std::size_t n = u.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = u[(i + n - 1) % n];
    const double right = u[(i + 1) % n];
    out[i] = -(left - 2.0 * u[i] + right) / (h * h);
  }
  return out;
}

} // namespace oracle
