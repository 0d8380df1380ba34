#include "fsrd/rng.hpp"

#include <cmath>
#include <numbers>

namespace fsrd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& c,
                                               const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
}

inline std::array<std::uint32_t, 4> block_for(std::uint64_t seed, std::uint32_t domain,
                                              std::uint64_t i0, std::uint64_t i1,
                                              std::uint64_t i2) {
  // Low halves fill the counter words; high halves fold into the fourth word
  // with distinct odd multipliers so 64-bit indices stay injective in effect.
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(i0), static_cast<std::uint32_t>(i1),
      static_cast<std::uint32_t>(i2),
      domain ^ (static_cast<std::uint32_t>(i0 >> 32) * 0x85EBCA6Bu) ^
          (static_cast<std::uint32_t>(i1 >> 32) * 0xC2B2AE35u) ^
          (static_cast<std::uint32_t>(i2 >> 32) * 0x27D4EB2Fu)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32(ctr, key);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  counter = round_once(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round_once(counter, key);
  }
  return counter;
}

double counter_uniform(std::uint64_t seed, std::uint32_t domain, std::uint64_t i0,
                       std::uint64_t i1, std::uint64_t i2) {
  const auto b = block_for(seed, domain, i0, i1, i2);
  return to_unit(b[0], b[1]);
}

double counter_normal(std::uint64_t seed, std::uint32_t domain, std::uint64_t i0,
                      std::uint64_t i1, std::uint64_t i2) {
  const auto b = block_for(seed, domain, i0, i1, i2);
  // Box-Muller; u1 shifted into (0, 1] so the log is always finite.
  const double u1 = to_unit(b[0], b[1]) + 0x1.0p-53;
  const double u2 = to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void NoiseStream::fill_increments(std::uint64_t step, double dt,
                                  std::span<double> out) const {
  const double root = std::sqrt(dt);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = root * normal(step, static_cast<std::uint64_t>(k));
}

} // namespace fsrd
