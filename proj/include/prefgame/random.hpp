#ifndef PREFGAME_RANDOM_HPP
#define PREFGAME_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace prefgame {

// std::mt19937_64 is specified bit-for-bit by the standard; the
// distributions are not, so seeded draws go through these helpers.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  // Plain modulo; the bias is below n / 2^64.
  return static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
}

}  // namespace prefgame

#endif  // PREFGAME_RANDOM_HPP
