#pragma once

#include <array>
#include <cstdint>

#include "orthodec/lattice.hpp"

namespace orthodec {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key): no state, so any draw can be recomputed from
/// its coordinates alone.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Stream tags separating independent families of draws under one seed.
enum class Stream : std::uint32_t {
  innovation = 0,
  product_axis_base = 0x100,  // + axis
  auxiliary = 0x1000,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// 64-bit digest of a lattice index, used as the low counter words.
inline std::uint64_t index_digest(const MultiIndex& i) {
  std::uint64_t h = splitmix64(0x51ED270B27D2A4A5ull ^ i.dim());
  for (std::size_t k = 0; k < i.dim(); ++k) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(i[k]));
  }
  return h;
}

/// 128 random bits attached to (seed, replica, stream, lattice index).
inline Philox4x32::Counter random_bits(std::uint64_t seed, std::uint64_t replica,
                                       std::uint32_t stream, const MultiIndex& index) {
  const std::uint64_t h = index_digest(index);
  const std::uint64_t r = splitmix64(replica ^ (static_cast<std::uint64_t>(stream) << 40));
  Philox4x32::Counter ctr{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32::block(ctr, key);
}

/// Uniform on the open interval (0,1) from two 32-bit words.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace orthodec
