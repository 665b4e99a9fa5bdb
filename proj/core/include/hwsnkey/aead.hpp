#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hwsnkey/types.hpp"

namespace hwsnkey {

// AES-128-GCM envelope: 96-bit nonce, ciphertext, 128-bit tag.
struct SealedBox {
  std::array<std::uint8_t, 12> nonce{};
  std::vector<std::uint8_t> ciphertext;
  std::array<std::uint8_t, 16> tag{};
};

SealedBox aead_seal(const Key128& key, const std::array<std::uint8_t, 12>& nonce,
                    std::span<const std::uint8_t> plaintext,
                    std::span<const std::uint8_t> aad = {});

// nullopt when the tag does not verify.
std::optional<std::vector<std::uint8_t>> aead_open(const Key128& key, const SealedBox& box,
                                                   std::span<const std::uint8_t> aad = {});

}  // namespace hwsnkey
