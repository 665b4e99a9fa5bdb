#include "hwsnkey/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>
#include <unordered_map>
#include <utility>

#include "hwsnkey/error.hpp"
#include "hwsnkey/prf.hpp"

namespace hwsnkey {

std::string_view to_string(BaselineScheme scheme) {
  switch (scheme) {
    case BaselineScheme::EG:
      return "eg";
    case BaselineScheme::QComposite:
      return "q-composite";
    case BaselineScheme::Blundo:
      return "blundo";
    case BaselineScheme::RandomPairwise:
      return "random-pairwise";
  }
  return "unknown";
}

std::optional<BaselineScheme> parse_baseline_scheme(std::string_view name) {
  for (auto s : {BaselineScheme::EG, BaselineScheme::QComposite, BaselineScheme::Blundo,
                 BaselineScheme::RandomPairwise}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void BaselineParams::validate() const {
  if (m < 1) throw ConfigError("scheme.m: must be >= 1");
  switch (scheme) {
    case BaselineScheme::EG:
    case BaselineScheme::QComposite:
      if (pool_size < 1 || pool_size > 0xFFFFFFFFULL) {
        throw ConfigError("scheme.pool_size: must lie in [1, 2^32)");
      }
      if (m > pool_size) {
        throw ConfigError("scheme.m: ring size " + std::to_string(m) +
                          " exceeds pool size " + std::to_string(pool_size));
      }
      if (scheme == BaselineScheme::QComposite && q_threshold < 2) {
        throw ConfigError("scheme.q_threshold: must be > 1 for q-composite");
      }
      break;
    case BaselineScheme::Blundo:
      if (t < 1) throw ConfigError("scheme.t: must be >= 1");
      break;
    case BaselineScheme::RandomPairwise:
      if (!(p > 0.0 && p <= 1.0)) throw ConfigError("scheme.p: must lie in (0, 1]");
      break;
  }
}

std::vector<std::uint32_t> BaselineNetwork::shared_pool_keys(NodeId u, NodeId v) const {
  const auto& a = key_rings.at(u);
  const auto& b = key_rings.at(v);
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool BaselineNetwork::shares_pairwise_key(NodeId u, NodeId v) const {
  auto it = pair_rings.find(u);
  if (it == pair_rings.end()) return false;
  const auto& ring = it->second;
  auto pos = std::lower_bound(ring.begin(), ring.end(), v,
                              [](const RingEntry& e, NodeId p) { return e.peer < p; });
  return pos != ring.end() && pos->peer == v;
}

PairwiseKey hash_pool_keys(const std::vector<Key128>& pool,
                           std::span<const std::uint32_t> indices) {
  std::vector<std::uint8_t> material;
  material.reserve(indices.size() * 16);
  for (auto i : indices) {
    material.insert(material.end(), pool[i].bytes.begin(), pool[i].bytes.end());
  }
  const auto digest = sha256(material);
  PairwiseKey k;
  std::copy_n(digest.begin(), k.bytes.size(), k.bytes.begin());
  return k;
}

double eg_share_probability(std::size_t m, std::size_t M) {
  if (m > M) throw ConfigError("eg_share_probability: m exceeds M");
  if (m == 0) return 0.0;
  if (2 * m > M) return 1.0;
  // C(M-m, m) / C(M, m) = prod_{i<m} (M-m-i) / (M-i)
  long double log_ratio = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    log_ratio += std::log1p(-static_cast<long double>(m) / static_cast<long double>(M - i));
  }
  return static_cast<double>(1.0L - std::exp(log_ratio));
}

namespace {

void key_pool_links(BaselineNetwork& net, const AdjacencyGraph& graph, std::size_t threshold,
                    bool hash_all_shared) {
  for (NodeId u : net.nodes) {
    for (NodeId v : graph.neighbors(u)) {
      if (v < u || !net.key_rings.contains(v)) continue;
      auto shared = net.shared_pool_keys(u, v);
      if (shared.size() < threshold) continue;
      // EG keys the link with one common key (the lowest index); q-composite
      // hashes every common key.
      if (!hash_all_shared) shared.resize(1);
      const auto key = hash_pool_keys(net.key_pool, shared);
      net.traffic.send(MessageKind::Notify, u, v);
      net.established.insert(u, key, v, key, KeyMethod::Baseline);
      net.link_inputs.emplace(LinkLedger::pair_key(u, v), std::move(shared));
    }
  }
}

void build_key_pool(BaselineNetwork& net, const AdjacencyGraph& graph, Rng& rng) {
  const auto& p = net.params;
  net.key_pool.resize(p.pool_size);
  for (auto& k : net.key_pool) k = rng.key128();
  for (NodeId id : net.nodes) {
    net.key_rings.emplace(id, sample_distinct_indices(static_cast<std::uint32_t>(p.pool_size),
                                                      static_cast<std::uint32_t>(p.m), rng));
  }
  if (p.scheme == BaselineScheme::EG) {
    key_pool_links(net, graph, 1, false);
  } else {
    key_pool_links(net, graph, p.q_threshold, true);
  }
}

void build_blundo(BaselineNetwork& net, const AdjacencyGraph& graph, Rng& rng) {
  const auto& p = net.params;
  net.poly = gen_symmetric_poly(p.field, p.t, rng);
  for (NodeId id : net.nodes) {
    if (id.value >= p.field.modulus()) {
      throw ConfigError("node id " + std::to_string(id.value) + " exceeds the field size");
    }
    net.shares.emplace(id, derive_share(*net.poly, id));
  }
  for (NodeId u : net.nodes) {
    for (NodeId v : graph.neighbors(u)) {
      if (v < u || !net.shares.contains(v)) continue;
      net.traffic.count_poly(u);
      net.traffic.count_poly(v);
      const auto ku = Key128::from_u64(eval_share(net.shares.at(u), v).value);
      const auto kv = Key128::from_u64(eval_share(net.shares.at(v), u).value);
      net.established.insert(u, ku, v, kv, KeyMethod::Baseline);
    }
  }
}

// Random pairwise keys: a simple random m-regular graph over an id space of
// n = ceil(m / p) slots, so each slot pair shares a key with probability
// m / (n - 1). The graph comes from the configuration model with self pairs
// and repeated pairs repaired by double-edge swaps. Participants occupy the
// first slots.
std::vector<std::pair<std::uint32_t, std::uint32_t>> random_regular_graph(std::size_t n,
                                                                          std::size_t m,
                                                                          Rng& rng) {
  std::vector<std::uint32_t> stubs;
  stubs.reserve(n * m);
  for (std::uint32_t slot = 0; slot < n; ++slot) {
    for (std::size_t j = 0; j < m; ++j) stubs.push_back(slot);
  }
  for (std::size_t i = stubs.size(); i > 1; --i) {
    std::swap(stubs[i - 1], stubs[rng.uniform_below(i)]);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);

  auto key = [](std::uint32_t a, std::uint32_t b) {
    return (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
  };
  std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
  multiplicity.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) multiplicity[key(a, b)]++;
  auto bad = [&](std::size_t i) {
    const auto [a, b] = edges[i];
    return a == b || multiplicity[key(a, b)] > 1;
  };

  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (bad(i)) work.push_back(i);
  }
  while (!work.empty()) {
    const std::size_t i = work.back();
    if (!bad(i)) {
      work.pop_back();
      continue;
    }
    const std::size_t j = rng.uniform_below(edges.size());
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng.bernoulli(0.5)) std::swap(c, d);
    if (i == j || a == c || b == d || key(a, c) == key(b, d)) continue;
    if (multiplicity[key(a, c)] != 0 || multiplicity[key(b, d)] != 0) continue;
    for (auto k : {key(a, b), key(edges[j].first, edges[j].second)}) {
      if (--multiplicity[k] == 0) multiplicity.erase(k);
    }
    edges[i] = {a, c};
    edges[j] = {b, d};
    multiplicity[key(a, c)]++;
    multiplicity[key(b, d)]++;
    work.pop_back();
  }
  return edges;
}

void build_random_pairwise(BaselineNetwork& net, const AdjacencyGraph& graph, Rng& rng) {
  const auto& p = net.params;
  const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(p.m) / p.p - 1e-9));
  if (n < net.nodes.size()) {
    throw ConfigError("scheme.p: id space m/p = " + std::to_string(n) +
                      " is smaller than the network (" + std::to_string(net.nodes.size()) +
                      " nodes)");
  }
  if (p.m >= n) throw ConfigError("scheme.m: ring size must be below the id space m/p");
  if ((n * p.m) % 2 != 0) {
    throw ConfigError("scheme.m: m * ceil(m/p) must be even for an m-regular pairing");
  }
  net.id_space = n;

  std::vector<std::vector<RingEntry>> rings(net.nodes.size());
  for (const auto& [a, b] : random_regular_graph(n, p.m, rng)) {
    const Key128 key = rng.key128();
    if (a >= net.nodes.size() || b >= net.nodes.size()) continue;
    rings[a].push_back({net.nodes[b], key});
    rings[b].push_back({net.nodes[a], key});
  }
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    auto& ring = rings[i];
    std::sort(ring.begin(), ring.end(),
              [](const RingEntry& x, const RingEntry& y) { return x.peer < y.peer; });
    net.pair_rings.emplace(net.nodes[i], std::move(ring));
  }
  for (NodeId u : net.nodes) {
    for (NodeId v : graph.neighbors(u)) {
      if (v < u || !net.pair_rings.contains(v)) continue;
      const auto& ru = net.pair_rings.at(u);
      auto it = std::lower_bound(ru.begin(), ru.end(), v,
                                 [](const RingEntry& e, NodeId x) { return e.peer < x; });
      if (it == ru.end() || it->peer != v) continue;
      const auto& rv = net.pair_rings.at(v);
      auto jt = std::lower_bound(rv.begin(), rv.end(), u,
                                 [](const RingEntry& e, NodeId x) { return e.peer < x; });
      net.traffic.send(MessageKind::Notify, u, v);
      net.established.insert(u, it->key, v, jt->key, KeyMethod::Baseline);
    }
  }
}

}  // namespace

BaselineNetwork baseline_predistribute(const BaselineParams& params, const Deployment& dep,
                                       const AdjacencyGraph& graph, Rng& rng) {
  params.validate();
  BaselineNetwork net;
  net.params = params;
  for (const auto& n : dep.nodes()) {
    if (n.active && n.kind != NodeKind::BaseStation) net.nodes.push_back(n.id);
  }
  for (NodeId id : net.nodes) net.traffic.broadcast(MessageKind::Hello, id);

  switch (params.scheme) {
    case BaselineScheme::EG:
    case BaselineScheme::QComposite:
      build_key_pool(net, graph, rng);
      break;
    case BaselineScheme::Blundo:
      build_blundo(net, graph, rng);
      break;
    case BaselineScheme::RandomPairwise:
      build_random_pairwise(net, graph, rng);
      break;
  }
  return net;
}

}  // namespace hwsnkey
