#include "hwsnkey/aead.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace hwsnkey {
namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CtxPtr new_ctx() {
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

void check(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(what);
}

}  // namespace

SealedBox aead_seal(const Key128& key, const std::array<std::uint8_t, 12>& nonce,
                    std::span<const std::uint8_t> plaintext,
                    std::span<const std::uint8_t> aad) {
  auto ctx = new_ctx();
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.bytes.data(),
                           nonce.data()),
        "AES-GCM encrypt init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "AES-GCM aad");
  }
  SealedBox box;
  box.nonce = nonce;
  box.ciphertext.resize(plaintext.size());
  check(EVP_EncryptUpdate(ctx.get(), box.ciphertext.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())),
        "AES-GCM encrypt");
  int tail = 0;
  check(EVP_EncryptFinal_ex(ctx.get(), box.ciphertext.data() + len, &tail), "AES-GCM final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(box.tag.size()),
                            box.tag.data()),
        "AES-GCM get tag");
  return box;
}

std::optional<std::vector<std::uint8_t>> aead_open(const Key128& key, const SealedBox& box,
                                                   std::span<const std::uint8_t> aad) {
  auto ctx = new_ctx();
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.bytes.data(),
                           box.nonce.data()),
        "AES-GCM decrypt init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "AES-GCM aad");
  }
  std::vector<std::uint8_t> plain(box.ciphertext.size());
  check(EVP_DecryptUpdate(ctx.get(), plain.data(), &len, box.ciphertext.data(),
                          static_cast<int>(box.ciphertext.size())),
        "AES-GCM decrypt");
  auto tag = box.tag;
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(tag.size()),
                            tag.data()),
        "AES-GCM set tag");
  int tail = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &tail) != 1) return std::nullopt;
  return plain;
}

}  // namespace hwsnkey
