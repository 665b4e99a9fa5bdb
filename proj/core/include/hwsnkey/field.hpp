#pragma once

#include <compare>
#include <cstdint>

namespace hwsnkey {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

struct FieldElement {
  std::uint64_t value = 0;
  auto operator<=>(const FieldElement&) const = default;
};

// Prime field GF(q). q must be prime and below 2^63 so that a sum of two
// reduced elements never overflows.
class FieldParams {
 public:
  // Throws ConfigError when q is not prime or is out of range.
  explicit FieldParams(std::uint64_t q = kMersenne61);

  std::uint64_t modulus() const { return q_; }

  FieldElement element(std::uint64_t v) const { return {v % q_}; }
  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1 % q_}; }

  FieldElement add(FieldElement a, FieldElement b) const {
    std::uint64_t s = a.value + b.value;
    return {s >= q_ ? s - q_ : s};
  }
  FieldElement sub(FieldElement a, FieldElement b) const {
    return {a.value >= b.value ? a.value - b.value : a.value + (q_ - b.value)};
  }
  FieldElement neg(FieldElement a) const { return {a.value == 0 ? 0 : q_ - a.value}; }
  FieldElement mul(FieldElement a, FieldElement b) const {
    __extension__ using wide = unsigned __int128;
    return {static_cast<std::uint64_t>((static_cast<wide>(a.value) * b.value) % q_)};
  }
  FieldElement pow(FieldElement base, std::uint64_t exp) const;
  // Throws std::domain_error for zero.
  FieldElement inv(FieldElement a) const;

  bool operator==(const FieldParams&) const = default;

 private:
  std::uint64_t q_;
};

}  // namespace hwsnkey
