#pragma once

#include <array>
#include <cstddef>

#include "fsrd/errors.hpp"

namespace fsrd {

// Uniform periodic grid on the box [-L, L)^dim with N points per dimension.
// N must be a power of two (the transform path is radix-2) and dim in 1..3.
// Point i_d along a dimension sits at x = -L + i_d * spacing().
class Grid {
public:
  Grid(int dim, int points_per_dim, double half_width)
      : dim_(dim), points_(points_per_dim), half_width_(half_width) {
    if (dim_ < 1 || dim_ > 3)
      throw InvalidArgument("grid dimension must be 1, 2, or 3");
    if (points_ < 4 || (points_ & (points_ - 1)) != 0)
      throw InvalidArgument("grid points per dimension must be a power of two >= 4");
    if (!(half_width_ > 0.0))
      throw InvalidArgument("grid half width must be positive");
  }

  int dim() const { return dim_; }
  int points() const { return points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / points_; }

  // Total number of grid points, N^dim.
  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim_; ++d) s *= static_cast<std::size_t>(points_);
    return s;
  }

  // Quadrature weight h^dim of one cell.
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= spacing();
    return v;
  }

  // Coordinates of the flat (row-major) index.
  std::array<double, 3> point(std::size_t flat) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    const auto n = static_cast<std::size_t>(points_);
    for (int d = dim_ - 1; d >= 0; --d) {
      const std::size_t i = flat % n;
      flat /= n;
      x[static_cast<std::size_t>(d)] = -half_width_ + static_cast<double>(i) * spacing();
    }
    return x;
  }

  // Squared Euclidean distance of the flat index's point from the origin.
  double radius_sq(std::size_t flat) const {
    const auto x = point(flat);
    double r = 0.0;
    for (int d = 0; d < dim_; ++d) r += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
    return r;
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && points_ == o.points_ && half_width_ == o.half_width_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  int dim_;
  int points_;
  double half_width_;
};

} // namespace fsrd
