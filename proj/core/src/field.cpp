#include "hwsnkey/field.hpp"

#include <stdexcept>
#include <string>

#include "hwsnkey/error.hpp"

namespace hwsnkey {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  __extension__ using wide = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<wide>(a) * b) % n);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These twelve bases are sufficient for n < 3.3e24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldParams::FieldParams(std::uint64_t q) : q_(q) {
  if (q >= (std::uint64_t{1} << 63)) {
    throw ConfigError("field modulus " + std::to_string(q) + " must be below 2^63");
  }
  if (!is_prime(q)) {
    throw ConfigError("field modulus " + std::to_string(q) + " is not prime");
  }
}

FieldElement FieldParams::pow(FieldElement base, std::uint64_t exp) const {
  return {powmod(base.value, exp, q_)};
}

FieldElement FieldParams::inv(FieldElement a) const {
  if (a.value == 0) throw std::domain_error("inverse of zero in GF(q)");
  return pow(a, q_ - 2);
}

}  // namespace hwsnkey
