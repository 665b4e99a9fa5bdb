#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwsnkey/deployment.hpp"
#include "hwsnkey/field.hpp"
#include "hwsnkey/keyring.hpp"
#include "hwsnkey/ledger.hpp"
#include "hwsnkey/polynomial.hpp"
#include "hwsnkey/rng.hpp"

namespace hwsnkey {

enum class BaselineScheme : std::uint8_t { EG, QComposite, Blundo, RandomPairwise };

std::string_view to_string(BaselineScheme scheme);
// Accepts "eg", "q-composite", "blundo", "random-pairwise".
std::optional<BaselineScheme> parse_baseline_scheme(std::string_view name);

struct BaselineParams {
  BaselineScheme scheme = BaselineScheme::EG;
  std::size_t pool_size = 100000;  // M, key pool (eg, q-composite)
  std::size_t m = 200;             // ring size
  std::size_t q_threshold = 2;     // minimum shared keys (q-composite)
  std::size_t t = 10;              // polynomial degree (blundo)
  double p = 0.5;                  // target pair probability (random-pairwise)
  FieldParams field{};

  void validate() const;
};

// A flat (non-hierarchical) comparison scheme over every head and sensor of a
// deployment. Links are keyed over the radio graph at construction.
struct BaselineNetwork {
  BaselineParams params;
  std::vector<NodeId> nodes;  // participants, ascending

  // eg / q-composite: pool keys and each node's ascending pool indices.
  std::vector<Key128> key_pool;
  std::unordered_map<NodeId, std::vector<std::uint32_t>> key_rings;

  // blundo
  std::optional<BivariatePolynomial> poly;
  std::unordered_map<NodeId, PolynomialShare> shares;

  // random-pairwise: id space size and each node's (peer, key) entries.
  std::size_t id_space = 0;
  std::unordered_map<NodeId, std::vector<RingEntry>> pair_rings;

  LinkLedger established;
  // Pool indices each eg / q-composite link key was hashed from, by
  // LinkLedger::pair_key.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> link_inputs;
  Traffic traffic{false};

  // eg / q-composite: ascending pool indices shared by two rings.
  std::vector<std::uint32_t> shared_pool_keys(NodeId u, NodeId v) const;
  // random-pairwise: whether u and v hold a common pairwise key.
  bool shares_pairwise_key(NodeId u, NodeId v) const;
};

BaselineNetwork baseline_predistribute(const BaselineParams& params, const Deployment& dep,
                                       const AdjacencyGraph& graph, Rng& rng);

// Link key of an eg / q-composite link: SHA-256 over the concatenated pool
// keys in ascending index order, truncated to 128 bits.
PairwiseKey hash_pool_keys(const std::vector<Key128>& pool,
                           std::span<const std::uint32_t> indices);

// Probability that two random m-subsets of an M-key pool intersect,
// 1 - C(M-m, m) / C(M, m).
double eg_share_probability(std::size_t m, std::size_t M);

}  // namespace hwsnkey
