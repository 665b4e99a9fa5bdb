#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "hwsnkey/types.hpp"

namespace hwsnkey {

// HMAC-SHA-256 with the inner and outer pad blocks absorbed once at
// construction, so each MAC costs two compression calls on short inputs.
class HmacSha256 {
 public:
  using Digest = std::array<std::uint8_t, 32>;

  explicit HmacSha256(std::span<const std::uint8_t> key);
  ~HmacSha256();
  HmacSha256(const HmacSha256&);
  HmacSha256& operator=(const HmacSha256&);
  HmacSha256(HmacSha256&&) noexcept;
  HmacSha256& operator=(HmacSha256&&) noexcept;

  Digest mac(std::span<const std::uint8_t> message) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Big-endian 8-byte encoding used as PRF input.
std::array<std::uint8_t, 8> encode_id(NodeId id);

// PRF_MK(id) = first 16 bytes of HMAC-SHA-256(MK, be64(id)).
PairwiseKey prf(const MasterKey& master, NodeId input);

// Same function with a precomputed key schedule.
class KeyedPrf {
 public:
  explicit KeyedPrf(const MasterKey& master) : hmac_(master.key.bytes) {}
  PairwiseKey operator()(NodeId input) const;

 private:
  HmacSha256 hmac_;
};

// SHA-256 of arbitrary bytes; used for baseline link keys and config hashes.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

}  // namespace hwsnkey
