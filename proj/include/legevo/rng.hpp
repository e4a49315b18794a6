#pragma once

#include <cstdint>
#include <random>

namespace legevo {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates nearby seed inputs.
inline std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

// Derives an independent stream seed from a master seed and a key tuple.
// Used for per-repeat and per-child streams so that results do not depend
// on evaluation order or concurrency degree.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

inline Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
  return Rng(derive_seed(master, a, b, c));
}

}  // namespace legevo
