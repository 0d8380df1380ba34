#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fsrd {

// Philox 4x32 block cipher with 10 rounds. Stateless: the output block is a
// pure function of (counter, key), which is what makes every draw in the
// toolkit addressable and independent of evaluation order or thread count.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// One draw addressed by (seed; domain; i0, i1, i2). Distinct domains give
// unrelated streams for the same indices; solvers use domain 0 for Brownian
// increments, experiment code uses higher domains for its own sampling.
// uniform is in [0, 1); normal is standard Gaussian via Box-Muller.
double counter_uniform(std::uint64_t seed, std::uint32_t domain,
                       std::uint64_t i0, std::uint64_t i1, std::uint64_t i2);
double counter_normal(std::uint64_t seed, std::uint32_t domain,
                      std::uint64_t i0, std::uint64_t i1, std::uint64_t i2);

// Addressable Gaussian increments for one trajectory of the driving noise:
// draw (step, mode) never depends on any other draw.
class NoiseStream {
public:
  NoiseStream(std::uint64_t seed, std::uint64_t trajectory)
      : seed_(seed), trajectory_(trajectory) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t trajectory() const { return trajectory_; }

  double normal(std::uint64_t step, std::uint64_t mode) const {
    return counter_normal(seed_, 0, trajectory_, step, mode);
  }

  // Brownian increments over one step of width dt, one entry per mode.
  void fill_increments(std::uint64_t step, double dt, std::span<double> out) const;

private:
  std::uint64_t seed_;
  std::uint64_t trajectory_;
};

} // namespace fsrd
