#pragma once

#include <cstdint>
#include <random>

namespace santa {

// splitmix64, used to derive independent stream seeds from (seed, keys...).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed) { return mix64(seed); }

template <class... Keys>
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t key, Keys... rest) {
  return stream_seed(mix64(seed ^ mix64(key)), rest...);
}

// Deterministic stream keyed by (seed, key...), independent of call order.
template <class... Keys>
std::mt19937_64 make_rng(std::uint64_t seed, Keys... keys) {
  return std::mt19937_64(stream_seed(seed, static_cast<std::uint64_t>(keys)...));
}

}  // namespace santa
