#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rex {

// Uniform integer in [0, bound) via rejection; avoids the modulo bias of
// `rng() % bound` without depending on std::uniform_int_distribution's
// implementation-defined stream.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound == 0) return 0;
  uint64_t limit = bound * (UINT64_MAX / bound);
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// k distinct values from [0, n), sorted. Partial Fisher-Yates.
inline std::vector<uint64_t> sample_without_replacement(std::mt19937_64& rng, uint64_t n,
                                                        uint64_t k) {
  std::vector<uint64_t> universe(n);
  for (uint64_t i = 0; i < n; ++i) universe[i] = i;
  if (k > n) k = n;
  for (uint64_t i = 0; i < k; ++i) {
    uint64_t j = i + uniform_below(rng, n - i);
    std::swap(universe[i], universe[j]);
  }
  universe.resize(k);
  std::sort(universe.begin(), universe.end());
  return universe;
}

}  // namespace rex
