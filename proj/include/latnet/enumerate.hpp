#pragma once

// Internal helpers shared by the exhaustive-enumeration kernels: mixed-radix
// index decoding over a list of stalks and a flag-filling loop that can run
// under OpenMP. Not part of the stable public surface.

#include <cstdint>
#include <limits>
#include <vector>

#include "latnet/errors.hpp"
#include "latnet/exec.hpp"
#include "latnet/lattice.hpp"

namespace latnet::detail {

constexpr long long kMaxEnumeration = 1'000'000;
constexpr int kMaxEnumRadix = 64;  // decode buffer bound for the kernels

inline long long checked_product(const std::vector<LatticePtr>& stalks) {
  long long prod = 1;
  for (const auto& L : stalks) {
    if (prod > std::numeric_limits<long long>::max() / L->m)
      throw TooLarge("cochain space does not fit in a 64-bit count");
    prod *= L->m;
  }
  return prod;
}

// Mixed-radix strides with position 0 most significant, so increasing index
// order is lexicographic order on the decoded tuples.
inline std::vector<long long> msb_strides(const std::vector<LatticePtr>& stalks) {
  std::vector<long long> stride(stalks.size(), 1);
  for (int i = static_cast<int>(stalks.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * stalks[i + 1]->m;
  return stride;
}

// Runs pred over [0, total) filling one flag per index, optionally with
// OpenMP; callers then collect set flags in index order so both modes
// produce identical output. pred must be safe to call concurrently.
template <class Pred>
std::vector<uint8_t> fill_flags(long long total, Exec mode, Pred pred) {
  std::vector<uint8_t> flags(static_cast<size_t>(total), 0);
  if (mode == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < total; ++i)
      flags[static_cast<size_t>(i)] = pred(i);
  } else {
    for (long long i = 0; i < total; ++i)
      flags[static_cast<size_t>(i)] = pred(i);
  }
  return flags;
}

}  // namespace latnet::detail
