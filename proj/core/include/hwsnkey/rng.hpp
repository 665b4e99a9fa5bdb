#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hwsnkey/types.hpp"

namespace hwsnkey {

// Splits one experiment seed into independent streams. The result is
// splitmix64(seed ^ fnv1a64(label) ^ splitmix64(index + 1)), so every
// (purpose, index) pair gets its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// Seeded random source. Built on std::mt19937_64, whose output sequence is
// fixed by the standard; bounded and real draws are computed here rather
// than through <random> distributions so results are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
      : engine_(derive_seed(seed, label, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  void fill(std::span<std::uint8_t> out);

  Key128 key128();

 private:
  std::mt19937_64 engine_;
};

// Picks k distinct items uniformly without replacement using the first k
// steps of a Fisher-Yates shuffle over a copy of `items`.
template <typename T>
std::vector<T> sample_without_replacement(std::span<const T> items,
                                          std::size_t k, Rng& rng) {
  std::vector<T> work(items.begin(), items.end());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(work.size() - i));
    std::swap(work[i], work[j]);
  }
  work.resize(k);
  return work;
}

// k distinct indices from [0, n), ascending, via Floyd's algorithm. Cost is
// O(k log k) regardless of n.
std::vector<std::uint32_t> sample_distinct_indices(std::uint32_t n, std::uint32_t k, Rng& rng);

}  // namespace hwsnkey
