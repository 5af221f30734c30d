#pragma once

#include <cstdint>

namespace latnet {

// Deterministic splitmix-style generator. Every randomized routine in the
// library derives its stream from an explicit seed through this type, so a
// given seed reproduces runs bit-for-bit across platforms.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Plain modulo: the bias is negligible for the
  // small n used here and keeping the reduction trivial makes the stream
  // layout easy to document and reproduce.
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  int below_int(int n) { return int(below(std::uint64_t(n))); }

  bool coin(double p) { return next_double() < p; }

  // Independent child stream; used to give each phase of a seeded experiment
  // its own generator so phases cannot perturb each other's draws.
  SplitMix64 fork() { return SplitMix64(next()); }
};

}  // namespace latnet
