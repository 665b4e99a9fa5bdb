#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace hwsnkey {

// Network-wide node identifier. Ids are consecutive positive integers
// handed out by the setup server; 0 is never a valid id.
struct NodeId {
  std::uint64_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint64_t v) : value(v) {}

  constexpr bool valid() const { return value != 0; }
  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind : std::uint8_t { RegularSensor, GroupHead, BaseStation };

std::string_view to_string(NodeKind kind);

// 128-bit opaque key material.
struct Key128 {
  std::array<std::uint8_t, 16> bytes{};

  auto operator<=>(const Key128&) const = default;

  Key128& operator^=(const Key128& other) {
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] ^= other.bytes[i];
    return *this;
  }
  friend Key128 operator^(Key128 a, const Key128& b) { return a ^= b; }

  std::string hex() const;
  // Widens a 64-bit value to 128 bits, big-endian, zero padded on the left.
  static Key128 from_u64(std::uint64_t v);
};

// Known only to its owner and the base station.
struct MasterKey {
  Key128 key;
  auto operator<=>(const MasterKey&) const = default;
};

using PairwiseKey = Key128;

struct Key128Hash {
  std::size_t operator()(const Key128& k) const noexcept {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    for (int i = 0; i < 8; ++i) {
      lo = (lo << 8) | k.bytes[i];
      hi = (hi << 8) | k.bytes[8 + i];
    }
    return static_cast<std::size_t>(lo ^ (hi * 0x9E3779B97F4A7C15ULL));
  }
};

}  // namespace hwsnkey

template <>
struct std::hash<hwsnkey::NodeId> {
  std::size_t operator()(const hwsnkey::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
