#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hwsnkey/error.hpp"
#include "hwsnkey/keyring.hpp"
#include "hwsnkey/prf.hpp"

namespace hwsnkey {
namespace {

struct Pool {
  std::vector<NodeId> ids;
  MasterKeyTable masters;
};

Pool make_pool(std::size_t size, std::uint64_t seed = 1) {
  Pool p;
  Rng rng(seed);
  for (std::uint64_t i = 1; i <= size; ++i) {
    p.ids.emplace_back(i);
    p.masters.generate(NodeId(i), rng);
  }
  return p;
}

TEST(KeyRingTest, MasterTableRejectsDuplicatesAndZero) {
  MasterKeyTable t;
  t.insert(NodeId(3), MasterKey{});
  EXPECT_THROW(t.insert(NodeId(3), MasterKey{}), ConfigError);
  EXPECT_THROW(t.insert(NodeId(0), MasterKey{}), ConfigError);
  EXPECT_THROW(t.at(NodeId(4)), ConfigError);
  EXPECT_TRUE(t.contains(NodeId(3)));
  EXPECT_EQ(t.size(), 1u);
}

TEST(KeyRingTest, SmallPoolForcesFullCoverage) {
  auto p = make_pool(3);
  Rng rng(2);
  const auto ring = build_sensor_ring(NodeId(2), p.ids, 2, p.masters, rng);
  EXPECT_TRUE(ring.holds(NodeId(1)));
  EXPECT_TRUE(ring.holds(NodeId(3)));
  EXPECT_FALSE(ring.holds(NodeId(2)));
}

TEST(KeyRingTest, RingEntriesAreDistinctAndVerify) {
  auto p = make_pool(501);
  Rng rng(3);
  const NodeId u(77);
  const auto ring = build_sensor_ring(u, p.ids, 200, p.masters, rng);
  ASSERT_EQ(ring.size(), 200u);
  std::set<NodeId> peers;
  for (const auto& e : ring.entries) {
    peers.insert(e.peer);
    EXPECT_NE(e.peer, u);
    EXPECT_EQ(e.key, prf(p.masters.at(e.peer), u));
  }
  EXPECT_EQ(peers.size(), 200u);
  EXPECT_EQ(ring.master, p.masters.at(u));
}

TEST(KeyRingTest, OversizedRingIsConfigError) {
  auto p = make_pool(10);
  Rng rng(4);
  EXPECT_THROW(build_sensor_ring(NodeId(1), p.ids, 10, p.masters, rng), ConfigError);
  EXPECT_NO_THROW(build_sensor_ring(NodeId(1), p.ids, 9, p.masters, rng));
}

TEST(KeyRingTest, HeadRingConstraints) {
  auto p = make_pool(51);
  Rng rng(5);
  const FieldParams f;
  const auto poly = gen_symmetric_poly(f, 3, rng);
  const NodeId gh(1);
  EXPECT_THROW(build_head_ring(gh, p.ids, 10, 20, derive_share(poly, gh), p.masters, rng),
               ConfigError);
  EXPECT_THROW(build_head_ring(gh, p.ids, 20, 20, derive_share(poly, NodeId(2)), p.masters, rng),
               ConfigError);

  // m' = n_i covers every other pool member.
  const auto ring = build_head_ring(gh, p.ids, 50, 20, derive_share(poly, gh), p.masters, rng);
  EXPECT_EQ(ring.size(), 50u);
  EXPECT_FALSE(ring.holds(gh));
  for (std::uint64_t i = 2; i <= 51; ++i) {
    EXPECT_TRUE(ring.holds(NodeId(i)));
  }
  for (const auto& e : ring.entries) {
    EXPECT_EQ(e.key, prf(p.masters.at(e.peer), gh));
  }
}

// Each of the 500 candidate peers should appear in about 40% of 10^4 rings.
// With 500 simultaneous comparisons a handful of 3-sigma excursions is
// expected, so the check bounds their share and forbids anything past 5 sigma.
TEST(KeyRingTest, RingSamplingIsUniform) {
  auto p = make_pool(501);
  Rng rng(6);
  const NodeId owner(501);
  std::vector<int> hits(502, 0);
  constexpr int kRings = 10000;
  for (int r = 0; r < kRings; ++r) {
    const auto ring = build_sensor_ring(owner, p.ids, 200, p.masters, rng);
    for (const auto& e : ring.entries) hits[e.peer.value]++;
  }
  EXPECT_EQ(hits[501], 0);
  const double mean = kRings * 0.4;
  const double sigma = std::sqrt(kRings * 0.4 * 0.6);
  int beyond3 = 0;
  for (std::uint64_t id = 1; id <= 500; ++id) {
    const double z = std::abs(hits[id] - mean) / sigma;
    EXPECT_LT(z, 5.0) << "peer " << id;
    beyond3 += z > 3.0;
  }
  EXPECT_LE(beyond3, 10);
}

}  // namespace
}  // namespace hwsnkey
