// The low-level SHA256_* interface is deprecated in OpenSSL 3 but is the
// only one that exposes a copyable context, which the cached key schedule
// relies on.
#define OPENSSL_SUPPRESS_DEPRECATED 1

#include "hwsnkey/prf.hpp"

#include <openssl/sha.h>

#include <cstring>

namespace hwsnkey {

struct HmacSha256::State {
  SHA256_CTX inner;
  SHA256_CTX outer;
};

HmacSha256::HmacSha256(std::span<const std::uint8_t> key) : state_(std::make_unique<State>()) {
  std::array<std::uint8_t, SHA256_CBLOCK> block{};
  if (key.size() > block.size()) {
    SHA256(key.data(), key.size(), block.data());
  } else {
    std::memcpy(block.data(), key.data(), key.size());
  }
  std::array<std::uint8_t, SHA256_CBLOCK> pad;
  for (std::size_t i = 0; i < pad.size(); ++i) pad[i] = block[i] ^ 0x36;
  SHA256_Init(&state_->inner);
  SHA256_Update(&state_->inner, pad.data(), pad.size());
  for (std::size_t i = 0; i < pad.size(); ++i) pad[i] = block[i] ^ 0x5c;
  SHA256_Init(&state_->outer);
  SHA256_Update(&state_->outer, pad.data(), pad.size());
}

HmacSha256::~HmacSha256() = default;
HmacSha256::HmacSha256(const HmacSha256& other)
    : state_(std::make_unique<State>(*other.state_)) {}
HmacSha256& HmacSha256::operator=(const HmacSha256& other) {
  if (this != &other) state_ = std::make_unique<State>(*other.state_);
  return *this;
}
HmacSha256::HmacSha256(HmacSha256&&) noexcept = default;
HmacSha256& HmacSha256::operator=(HmacSha256&&) noexcept = default;

HmacSha256::Digest HmacSha256::mac(std::span<const std::uint8_t> message) const {
  Digest inner_digest;
  SHA256_CTX ctx = state_->inner;
  SHA256_Update(&ctx, message.data(), message.size());
  SHA256_Final(inner_digest.data(), &ctx);

  Digest out;
  ctx = state_->outer;
  SHA256_Update(&ctx, inner_digest.data(), inner_digest.size());
  SHA256_Final(out.data(), &ctx);
  return out;
}

std::array<std::uint8_t, 8> encode_id(NodeId id) {
  std::array<std::uint8_t, 8> out;
  for (int i = 0; i < 8; ++i) out[7 - i] = static_cast<std::uint8_t>(id.value >> (8 * i));
  return out;
}

namespace {
PairwiseKey truncate(const HmacSha256::Digest& d) {
  PairwiseKey k;
  std::memcpy(k.bytes.data(), d.data(), k.bytes.size());
  return k;
}
}  // namespace

PairwiseKey prf(const MasterKey& master, NodeId input) {
  return KeyedPrf(master)(input);
}

PairwiseKey KeyedPrf::operator()(NodeId input) const {
  return truncate(hmac_.mac(encode_id(input)));
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

}  // namespace hwsnkey
