#include <gtest/gtest.h>

#include <stdexcept>

#include "hwsnkey/error.hpp"
#include "hwsnkey/field.hpp"
#include "hwsnkey/rng.hpp"

namespace hwsnkey {
namespace {

TEST(FieldTest, PrimalityCheck) {
  for (std::uint64_t p : std::initializer_list<std::uint64_t>{2ULL, 3ULL, 7ULL, 65537ULL, kMersenne61, 1000000007ULL}) {
    EXPECT_TRUE(is_prime(p)) << p;
  }
  for (std::uint64_t c : std::initializer_list<std::uint64_t>{0ULL, 1ULL, 4ULL, 561ULL, 3215031751ULL, kMersenne61 - 2}) {
    EXPECT_FALSE(is_prime(c)) << c;
  }
}

TEST(FieldTest, RejectsCompositeModulus) {
  EXPECT_THROW(FieldParams(8), ConfigError);
  EXPECT_THROW(FieldParams(1), ConfigError);
  EXPECT_NO_THROW(FieldParams(7));
}

// Every axiom checked over all of GF(7) against plain integer arithmetic.
TEST(FieldTest, ExhaustiveGf7) {
  const FieldParams f(7);
  for (std::uint64_t a = 0; a < 7; ++a) {
    for (std::uint64_t b = 0; b < 7; ++b) {
      const auto ea = f.element(a);
      const auto eb = f.element(b);
      EXPECT_EQ(f.add(ea, eb).value, (a + b) % 7);
      EXPECT_EQ(f.sub(ea, eb).value, (a + 7 - b) % 7);
      EXPECT_EQ(f.mul(ea, eb).value, (a * b) % 7);
      for (std::uint64_t c = 0; c < 7; ++c) {
        const auto ec = f.element(c);
        EXPECT_EQ(f.add(f.add(ea, eb), ec), f.add(ea, f.add(eb, ec)));
        EXPECT_EQ(f.mul(f.mul(ea, eb), ec), f.mul(ea, f.mul(eb, ec)));
        EXPECT_EQ(f.mul(ea, f.add(eb, ec)), f.add(f.mul(ea, eb), f.mul(ea, ec)));
      }
    }
    EXPECT_EQ(f.add(f.element(a), f.neg(f.element(a))), f.zero());
    if (a != 0) {
      EXPECT_EQ(f.mul(f.element(a), f.inv(f.element(a))), f.one());
    }
  }
  EXPECT_THROW(f.inv(f.zero()), std::domain_error);
}

TEST(FieldTest, RandomizedDefaultField) {
  const FieldParams f;
  Rng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const auto a = f.element(rng.uniform_below(kMersenne61));
    const auto b = f.element(rng.uniform_below(kMersenne61));
    const auto c = f.element(rng.uniform_below(kMersenne61));
    EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    if (a.value != 0) {
      EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
    }
    EXPECT_LT(f.mul(a, b).value, kMersenne61);
  }
}

TEST(FieldTest, PowMatchesRepeatedMultiplication) {
  const FieldParams f(1000000007ULL);
  const auto base = f.element(123456789);
  auto acc = f.one();
  for (std::uint64_t e = 0; e < 50; ++e) {
    EXPECT_EQ(f.pow(base, e), acc);
    acc = f.mul(acc, base);
  }
  // Fermat: a^(p-1) = 1.
  EXPECT_EQ(f.pow(base, 1000000006ULL), f.one());
}

}  // namespace
}  // namespace hwsnkey
