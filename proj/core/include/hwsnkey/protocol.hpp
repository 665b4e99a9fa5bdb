#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hwsnkey/aead.hpp"
#include "hwsnkey/deployment.hpp"
#include "hwsnkey/field.hpp"
#include "hwsnkey/keyring.hpp"
#include "hwsnkey/ledger.hpp"
#include "hwsnkey/polynomial.hpp"
#include "hwsnkey/rng.hpp"

namespace hwsnkey {

struct SchemeParams {
  std::size_t m = 200;        // sensor ring size
  std::size_t m_prime = 200;  // head ring size, >= m
  std::size_t t = 250;        // polynomial degree, > number of groups
  FieldParams field{};

  // Throws ConfigError naming the field that breaks m' >= m or t > l.
  void validate(std::size_t group_count) const;
};

// Material kept by the offline setup server after pre-distribution. It is
// needed again only for dynamic node and head addition.
struct SetupServer {
  BivariatePolynomial poly;
  std::vector<std::vector<NodeId>> pools;  // N_i: head + provisioned sensors
};

// Record of one base-station mediated exchange for a misdeployed node.
struct Case3Exchange {
  NodeId u;  // misdeployed node
  NodeId v;  // neighbor in the foreign group
  Key128 rn_u;
  Key128 rn_v;
  PairwiseKey k_uv;
  SealedBox protected_u;  // E(MK_u, k_uv ^ id_u ^ RN_u)
  SealedBox protected_v;  // E(MK_v, k_uv ^ id_v ^ RN_v)
  std::size_t hops = 0;   // unicast messages spent
};

enum class Case3Outcome { Established, AlreadyKeyed, Rejected, Deferred };

// Fault injection for the mediated exchange.
struct Case3Faults {
  bool corrupt_request = false;  // flip a ciphertext byte while in transit
  bool wrong_master = false;     // v seals its request under a bogus key
};

struct Case3Summary {
  std::size_t established = 0;
  std::size_t rejected = 0;
  std::size_t deferred = 0;
};

class NetworkState {
 public:
  NetworkState(SchemeParams params, SetupServer server, bool log_messages);

  SchemeParams params;
  SetupServer server;
  MasterKeyTable masters;  // base-station table
  std::unordered_map<NodeId, SensorKeyRing> sensor_rings;
  std::unordered_map<NodeId, GroupHeadKeyRing> head_rings;
  LinkLedger established;
  Traffic traffic;
  std::vector<Case3Exchange> case3_exchanges;
  std::vector<std::pair<NodeId, NodeId>> case3_deferred;
  std::size_t case3_rejections = 0;

  // Ring of a sensor or head; nullptr for anything else.
  const KeyRing* ring_of(NodeId id) const;
  bool hello_sent(NodeId id) const;
  void mark_hello(NodeId id);

 private:
  std::vector<bool> hello_;
};

// Key pre-distribution. Ring sizes are capped at |N_i| - 1 so that
// m >= n_i + 1 gives every node the whole pool. Misdeployed sensors are
// provisioned from the pool of the group they were meant for.
NetworkState predistribute(const Deployment& dep, const SchemeParams& params, Rng& rng,
                           bool log_messages = true);

// Heads in mutual range exchange ids and evaluate their shares.
void establish_inter_group(NetworkState& state, const Deployment& dep,
                           const AdjacencyGraph& graph);

// Every sensor and head broadcasts its id once, then each same-group adjacent
// pair with a ring hit keys up (Case I for sensor pairs, Case II for
// head-sensor pairs). Pairs are visited in ascending (smaller id, larger id)
// order. When both rings hit, a head notifies before a sensor; between two
// sensors the smaller id notifies.
void establish_intra_group(NetworkState& state, const Deployment& dep,
                           const AdjacencyGraph& graph);

// Base-station mediated key for misdeployed sensor u and neighbor v, where v
// belongs to the group whose cell u landed in (v may be that group's head).
// Throws std::invalid_argument when the pair does not qualify.
Case3Outcome establish_case3(NetworkState& state, const Deployment& dep,
                             const AdjacencyGraph& graph, NodeId u, NodeId v, Rng& rng,
                             const Case3Faults& faults = {});

// Runs establish_case3 for every qualifying unkeyed neighbor of every
// misdeployed sensor, in ascending id order.
Case3Summary establish_all_case3(NetworkState& state, const Deployment& dep,
                                 const AdjacencyGraph& graph, Rng& rng);

// Inter-group, intra-group, then Case III.
Case3Summary run_establishment(NetworkState& state, const Deployment& dep,
                               const AdjacencyGraph& graph, Rng& rng);

// Dynamic sensor addition into `group`; returns the new id.
NodeId add_sensor(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                  std::size_t group, Rng& rng);

// Marks a group's head as captured: its keys are revoked and it leaves the
// pool and the radio graph.
void remove_head(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                 std::size_t group);

// Deploys a fresh head with a new share of the same polynomial. Throws
// ConfigError when the group still has an active head.
NodeId replace_head(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                    std::size_t group, Rng& rng);

// Packs a node id into the 128-bit XOR operand used by Case III.
Key128 id_block(NodeId id);

}  // namespace hwsnkey
