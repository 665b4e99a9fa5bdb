#include "hwsnkey/rng.hpp"

#include <cstdio>
#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace hwsnkey {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::RegularSensor:
      return "sensor";
    case NodeKind::GroupHead:
      return "head";
    case NodeKind::BaseStation:
      return "base_station";
  }
  return "unknown";
}

std::string Key128::hex() const {
  std::string out;
  out.reserve(32);
  char buf[3];
  for (auto b : bytes) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

Key128 Key128::from_u64(std::uint64_t v) {
  Key128 k;
  for (int i = 0; i < 8; ++i) k.bytes[15 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return k;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index) {
  return splitmix64(seed ^ fnv1a64(label) ^ splitmix64(index + 1));
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform_below: bound must be > 0");
  // Lemire's nearly-divisionless rejection method.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
}

std::vector<std::uint32_t> sample_distinct_indices(std::uint32_t n, std::uint32_t k, Rng& rng) {
  if (k > n) throw std::invalid_argument("sample_distinct_indices: k exceeds n");
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(k * 2);
  for (std::uint32_t j = n - k; j < n; ++j) {
    const auto r = static_cast<std::uint32_t>(rng.uniform_below(std::uint64_t{j} + 1));
    const std::uint32_t pick = seen.insert(r).second ? r : (seen.insert(j), j);
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Key128 Rng::key128() {
  Key128 k;
  fill(k.bytes);
  return k;
}

}  // namespace hwsnkey
