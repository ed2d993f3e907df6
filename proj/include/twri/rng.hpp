#ifndef TWRI_RNG_HPP_
#define TWRI_RNG_HPP_

#include <cstdint>
#include <random>

namespace twri {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent deterministic stream for a (seed, stream...) tuple; used so
/// parallel maps draw from non-overlapping generators.
template <typename... Ids>
std::mt19937_64 make_rng(std::uint64_t seed, Ids... stream) {
  std::uint64_t s = splitmix64(seed);
  ((s = splitmix64(s ^ static_cast<std::uint64_t>(stream))), ...);
  return std::mt19937_64(s);
}

}  // namespace twri

#endif  // TWRI_RNG_HPP_
