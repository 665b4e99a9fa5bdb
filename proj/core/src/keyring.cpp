#include "hwsnkey/keyring.hpp"

#include <algorithm>
#include <string>

#include "hwsnkey/error.hpp"

namespace hwsnkey {

void MasterKeyTable::insert(NodeId id, const MasterKey& key) {
  if (!id.valid()) throw ConfigError("master key for invalid node id 0");
  if (id.value >= by_id_.size()) by_id_.resize(id.value + 1);
  if (by_id_[id.value]) {
    throw ConfigError("duplicate master key for node " + std::to_string(id.value));
  }
  by_id_[id.value].emplace(Entry{key, KeyedPrf(key)});
  ++count_;
}

MasterKey MasterKeyTable::generate(NodeId id, Rng& rng) {
  const MasterKey key{rng.key128()};
  insert(id, key);
  return key;
}

bool MasterKeyTable::contains(NodeId id) const {
  return id.value < by_id_.size() && by_id_[id.value].has_value();
}

const MasterKeyTable::Entry& MasterKeyTable::entry(NodeId id) const {
  if (!contains(id)) {
    throw ConfigError("no master key for node " + std::to_string(id.value));
  }
  return *by_id_[id.value];
}

const MasterKey& MasterKeyTable::at(NodeId id) const { return entry(id).key; }

PairwiseKey MasterKeyTable::prf(NodeId keyholder, NodeId input) const {
  return entry(keyholder).keyed(input);
}

const RingEntry* KeyRing::find(NodeId peer) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), peer,
                             [](const RingEntry& e, NodeId p) { return e.peer < p; });
  return it != entries.end() && it->peer == peer ? &*it : nullptr;
}

namespace {

KeyRing build_ring(NodeId owner, std::span<const NodeId> pool, std::size_t size,
                   const MasterKeyTable& masters, Rng& rng) {
  std::vector<NodeId> candidates;
  candidates.reserve(pool.size());
  for (NodeId id : pool) {
    if (id != owner) candidates.push_back(id);
  }
  if (size > candidates.size()) {
    throw ConfigError("ring size " + std::to_string(size) + " exceeds the " +
                      std::to_string(candidates.size()) + " candidate peers of node " +
                      std::to_string(owner.value));
  }
  const auto peers = sample_without_replacement<NodeId>(candidates, size, rng);

  KeyRing ring;
  ring.own_id = owner;
  ring.master = masters.at(owner);
  ring.entries.reserve(size);
  for (NodeId peer : peers) ring.entries.push_back({peer, masters.prf(peer, owner)});
  std::sort(ring.entries.begin(), ring.entries.end(),
            [](const RingEntry& a, const RingEntry& b) { return a.peer < b.peer; });
  return ring;
}

}  // namespace

SensorKeyRing build_sensor_ring(NodeId u, std::span<const NodeId> pool, std::size_t m,
                                const MasterKeyTable& masters, Rng& rng) {
  return SensorKeyRing{build_ring(u, pool, m, masters, rng)};
}

GroupHeadKeyRing build_head_ring(NodeId gh, std::span<const NodeId> pool,
                                 std::size_t m_prime, std::size_t m, PolynomialShare share,
                                 const MasterKeyTable& masters, Rng& rng) {
  if (m_prime < m) {
    throw ConfigError("head ring size m' = " + std::to_string(m_prime) +
                      " is smaller than sensor ring size m = " + std::to_string(m));
  }
  if (share.owner != gh) throw ConfigError("polynomial share belongs to another node");
  GroupHeadKeyRing ring;
  static_cast<KeyRing&>(ring) = build_ring(gh, pool, m_prime, masters, rng);
  ring.share = std::move(share);
  return ring;
}

}  // namespace hwsnkey
