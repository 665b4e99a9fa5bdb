#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hwsnkey/polynomial.hpp"
#include "hwsnkey/prf.hpp"
#include "hwsnkey/rng.hpp"
#include "hwsnkey/types.hpp"

namespace hwsnkey {

// Base-station view of every node's master key, with the PRF key schedule
// cached per node.
class MasterKeyTable {
 public:
  // Throws ConfigError if `id` is invalid or already present.
  void insert(NodeId id, const MasterKey& key);
  MasterKey generate(NodeId id, Rng& rng);

  bool contains(NodeId id) const;
  const MasterKey& at(NodeId id) const;
  // PRF_{MK_keyholder}(input)
  PairwiseKey prf(NodeId keyholder, NodeId input) const;
  std::size_t size() const { return count_; }

 private:
  struct Entry {
    MasterKey key;
    KeyedPrf keyed;
  };
  const Entry& entry(NodeId id) const;

  std::vector<std::optional<Entry>> by_id_;
  std::size_t count_ = 0;
};

// A pre-loaded (SK, peer id) combination.
struct RingEntry {
  NodeId peer;
  PairwiseKey key;
};

// Entries are kept sorted by peer id.
struct KeyRing {
  NodeId own_id;
  MasterKey master;
  std::vector<RingEntry> entries;

  const RingEntry* find(NodeId peer) const;
  bool holds(NodeId peer) const { return find(peer) != nullptr; }
  std::size_t size() const { return entries.size(); }
};

struct SensorKeyRing : KeyRing {};

struct GroupHeadKeyRing : KeyRing {
  PolynomialShare share;
};

// m distinct peers drawn uniformly from pool \ {u}; each entry holds
// PRF_{MK_peer}(id_u). Throws ConfigError when m exceeds the candidates.
SensorKeyRing build_sensor_ring(NodeId u, std::span<const NodeId> pool, std::size_t m,
                                const MasterKeyTable& masters, Rng& rng);

// As above with the head's id as PRF input and the polynomial share attached.
// Throws ConfigError when m_prime < m or m_prime exceeds the candidates.
GroupHeadKeyRing build_head_ring(NodeId gh, std::span<const NodeId> pool,
                                 std::size_t m_prime, std::size_t m, PolynomialShare share,
                                 const MasterKeyTable& masters, Rng& rng);

}  // namespace hwsnkey
