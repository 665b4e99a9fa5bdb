#include "hwsnkey/protocol.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "hwsnkey/error.hpp"
#include "hwsnkey/prf.hpp"

namespace hwsnkey {

void SchemeParams::validate(std::size_t group_count) const {
  if (m < 1) throw ConfigError("scheme.m: must be >= 1");
  if (m_prime < m) {
    throw ConfigError("scheme.m_prime: must be >= m (" + std::to_string(m_prime) + " < " +
                      std::to_string(m) + ")");
  }
  if (t <= group_count) {
    throw ConfigError("scheme.t: polynomial degree " + std::to_string(t) +
                      " must exceed the number of groups " + std::to_string(group_count));
  }
}

NetworkState::NetworkState(SchemeParams p, SetupServer s, bool log_messages)
    : params(p), server(std::move(s)), traffic(log_messages) {}

const KeyRing* NetworkState::ring_of(NodeId id) const {
  if (auto it = sensor_rings.find(id); it != sensor_rings.end()) return &it->second;
  if (auto it = head_rings.find(id); it != head_rings.end()) return &it->second;
  return nullptr;
}

bool NetworkState::hello_sent(NodeId id) const {
  return id.value < hello_.size() && hello_[id.value];
}

void NetworkState::mark_hello(NodeId id) {
  if (id.value >= hello_.size()) hello_.resize(id.value + 1);
  hello_[id.value] = true;
}

Key128 id_block(NodeId id) { return Key128::from_u64(id.value); }

namespace {

void require_id_fits_field(const SchemeParams& params, NodeId id) {
  if (id.value >= params.field.modulus()) {
    throw ConfigError("node id " + std::to_string(id.value) +
                      " is not distinct modulo the field size " +
                      std::to_string(params.field.modulus()));
  }
}

std::size_t capped(std::size_t want, std::size_t pool_size) {
  return std::min(want, pool_size == 0 ? 0 : pool_size - 1);
}

bool is_keyable(const NodeRecord& n) {
  return n.active && n.kind != NodeKind::BaseStation;
}

void say_hello(NetworkState& state, NodeId id) {
  if (state.hello_sent(id)) return;
  state.mark_hello(id);
  state.traffic.broadcast(MessageKind::Hello, id);
}

// Notifier holds the peer's id in its ring; the notified node recomputes the
// key from its own master key.
void key_by_notification(NetworkState& state, NodeId notifier, NodeId notified,
                         KeyMethod method) {
  const RingEntry* entry = state.ring_of(notifier)->find(notified);
  state.traffic.send(MessageKind::Notify, notifier, notified);
  state.traffic.count_prf(notified);
  const PairwiseKey recomputed = state.masters.prf(notified, notifier);
  state.established.insert(notifier, entry->key, notified, recomputed, method, notified);
}

void intra_pair(NetworkState& state, const Deployment& dep, NodeId a, NodeId b) {
  if (state.established.contains(a, b)) return;
  const auto& na = dep.node(a);
  const auto& nb = dep.node(b);
  if (!is_keyable(na) || !is_keyable(nb)) return;
  if (na.home_group != nb.home_group) return;
  const bool a_head = na.kind == NodeKind::GroupHead;
  const bool b_head = nb.kind == NodeKind::GroupHead;
  if (a_head && b_head) return;

  const KeyRing* ra = state.ring_of(a);
  const KeyRing* rb = state.ring_of(b);
  if (!ra || !rb) return;
  const bool a_hit = ra->holds(b);
  const bool b_hit = rb->holds(a);
  if (!a_hit && !b_hit) return;

  if (a_head || b_head) {
    const NodeId head = a_head ? a : b;
    const NodeId sensor = a_head ? b : a;
    const bool head_hit = a_head ? a_hit : b_hit;
    if (head_hit) {
      key_by_notification(state, head, sensor, KeyMethod::PrfCase2);
    } else {
      key_by_notification(state, sensor, head, KeyMethod::PrfCase2);
    }
    return;
  }
  const NodeId lo = std::min(a, b);
  const NodeId hi = std::max(a, b);
  const bool lo_hit = lo == a ? a_hit : b_hit;
  if (lo_hit) {
    key_by_notification(state, lo, hi, KeyMethod::PrfCase1);
  } else {
    key_by_notification(state, hi, lo, KeyMethod::PrfCase1);
  }
}

void inter_pair(NetworkState& state, const Deployment& dep, NodeId a, NodeId b) {
  if (state.established.contains(a, b)) return;
  if (!dep.is_active(a) || !dep.is_active(b)) return;
  const auto& ha = state.head_rings.at(a);
  const auto& hb = state.head_rings.at(b);
  state.traffic.send(MessageKind::IdExchange, a, b);
  state.traffic.send(MessageKind::IdExchange, b, a);
  state.traffic.count_poly(a);
  state.traffic.count_poly(b);
  const auto key_a = Key128::from_u64(eval_share(ha.share, b).value);
  const auto key_b = Key128::from_u64(eval_share(hb.share, a).value);
  state.established.insert(a, key_a, b, key_b, KeyMethod::Poly);
}

// Breadth-first path from `from` to `to` over nodes accepted by `allow`,
// including both endpoints. Empty when unreachable.
template <typename Allow>
std::vector<NodeId> shortest_path(const AdjacencyGraph& graph, NodeId from, NodeId to,
                                  Allow allow) {
  if (from == to) return {from};
  std::unordered_map<NodeId, NodeId> parent;
  std::deque<NodeId> queue{from};
  parent.emplace(from, from);
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (NodeId next : graph.neighbors(cur)) {
      if (parent.contains(next) || !(next == to || allow(next))) continue;
      parent.emplace(next, cur);
      if (next == to) {
        std::vector<NodeId> path{to};
        for (NodeId p = cur; p != from; p = parent.at(p)) path.push_back(p);
        path.push_back(from);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(next);
    }
  }
  return {};
}

std::array<std::uint8_t, 12> nonce96(Rng& rng) {
  std::array<std::uint8_t, 12> n;
  rng.fill(n);
  return n;
}

std::vector<std::uint8_t> to_bytes(const Key128& k) { return {k.bytes.begin(), k.bytes.end()}; }

Key128 from_bytes(std::span<const std::uint8_t> b) {
  Key128 k;
  std::copy_n(b.begin(), k.bytes.size(), k.bytes.begin());
  return k;
}

bool qualifies_as_case3_peer(const Deployment& dep, const NodeRecord& u, const NodeRecord& v) {
  if (!v.active || v.id == u.id || v.home_group != u.cell) return false;
  if (v.kind == NodeKind::GroupHead) return dep.head(static_cast<std::size_t>(u.cell)) == v.id;
  return v.kind == NodeKind::RegularSensor && !v.misdeployed;
}

}  // namespace

NetworkState predistribute(const Deployment& dep, const SchemeParams& params, Rng& rng,
                           bool log_messages) {
  const std::size_t groups = dep.group_count();
  params.validate(groups);

  // Steps 1-2: ids come from the deployment; one master key per node.
  MasterKeyTable masters;
  for (const auto& n : dep.nodes()) {
    if (!is_keyable(n)) continue;
    require_id_fits_field(params, n.id);
    masters.generate(n.id, rng);
  }

  // Step 3: node pools.
  std::vector<std::vector<NodeId>> pools(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    if (dep.head(g).valid()) pools[g].push_back(dep.head(g));
    for (NodeId s : dep.sensors_of(g)) {
      if (dep.is_active(s)) pools[g].push_back(s);
    }
    std::sort(pools[g].begin(), pools[g].end());
  }

  // Step 5: one symmetric polynomial for all heads.
  auto poly = gen_symmetric_poly(params.field, params.t, rng);

  NetworkState state(params, SetupServer{std::move(poly), std::move(pools)}, log_messages);
  state.masters = std::move(masters);
  const auto& server = state.server;

  // Step 6: head rings plus shares.
  for (std::size_t g = 0; g < groups; ++g) {
    const NodeId gh = dep.head(g);
    if (!gh.valid()) continue;
    const auto& pool = server.pools[g];
    const std::size_t size = capped(params.m_prime, pool.size());
    state.head_rings.emplace(
        gh, build_head_ring(gh, pool, size, std::min(size, capped(params.m, pool.size())),
                            derive_share(server.poly, gh), state.masters, rng));
  }

  // Step 4: sensor rings over the planned group's pool.
  state.sensor_rings.reserve(dep.nodes().size());
  for (std::size_t g = 0; g < groups; ++g) {
    const auto& pool = server.pools[g];
    const std::size_t size = capped(params.m, pool.size());
    for (NodeId s : dep.sensors_of(g)) {
      if (!dep.is_active(s)) continue;
      state.sensor_rings.emplace(s, build_sensor_ring(s, pool, size, state.masters, rng));
    }
  }
  return state;
}

void establish_inter_group(NetworkState& state, const Deployment& dep,
                           const AdjacencyGraph& graph) {
  for (std::size_t g = 0; g < dep.group_count(); ++g) {
    const NodeId a = dep.head(g);
    if (!a.valid()) continue;
    for (NodeId b : graph.neighbors(a)) {
      if (b < a) continue;
      const auto& nb = dep.node(b);
      if (nb.active && nb.kind == NodeKind::GroupHead) inter_pair(state, dep, a, b);
    }
  }
}

void establish_intra_group(NetworkState& state, const Deployment& dep,
                           const AdjacencyGraph& graph) {
  state.established.reserve(state.established.size() + graph.edge_count());
  for (const auto& n : dep.nodes()) {
    if (is_keyable(n)) say_hello(state, n.id);
  }
  for (const auto& n : dep.nodes()) {
    if (!is_keyable(n)) continue;
    for (NodeId v : graph.neighbors(n.id)) {
      if (v > n.id) intra_pair(state, dep, n.id, v);
    }
  }
}

Case3Outcome establish_case3(NetworkState& state, const Deployment& dep,
                             const AdjacencyGraph& graph, NodeId u, NodeId v, Rng& rng,
                             const Case3Faults& faults) {
  const auto& nu = dep.node(u);
  const auto& nv = dep.node(v);
  if (!nu.active || nu.kind != NodeKind::RegularSensor || !nu.misdeployed) {
    throw std::invalid_argument("case III requires an active misdeployed sensor, got node " +
                                std::to_string(u.value));
  }
  if (!qualifies_as_case3_peer(dep, nu, nv) || !graph.adjacent(u, v)) {
    throw std::invalid_argument("node " + std::to_string(v.value) +
                                " is not a neighbor of node " + std::to_string(u.value) +
                                " in the group it landed in");
  }
  if (state.established.contains(u, v)) return Case3Outcome::AlreadyKeyed;

  const auto group = static_cast<std::size_t>(nu.cell);
  const NodeId gh = dep.head(group);
  const NodeId bs = dep.base_station();
  if (!gh.valid() || !bs.valid()) {
    state.case3_deferred.emplace_back(u, v);
    return Case3Outcome::Deferred;
  }
  // v reaches its head through members of its own group; heads relay to the
  // base station over head-to-head links.
  const auto to_head = shortest_path(graph, v, gh, [&](NodeId x) {
    const auto& r = dep.node(x);
    return r.active && r.kind == NodeKind::RegularSensor && !r.misdeployed &&
           r.home_group == nu.cell;
  });
  const auto to_bs = shortest_path(graph, gh, bs, [&](NodeId x) {
    const auto& r = dep.node(x);
    return r.active && r.kind == NodeKind::GroupHead;
  });
  if (to_head.empty() || to_bs.empty()) {
    state.case3_deferred.emplace_back(u, v);
    return Case3Outcome::Deferred;
  }
  std::vector<NodeId> uplink = to_head;
  uplink.insert(uplink.end(), to_bs.begin() + 1, to_bs.end());

  Case3Exchange ex;
  ex.u = u;
  ex.v = v;
  std::size_t messages = 0;

  // u -> v : id_u, RN_u
  ex.rn_u = rng.key128();
  state.traffic.send(MessageKind::Case3Hello, u, v);
  ++messages;

  // v -> GH_j -> ... -> BS : E(MK_v, id_v | id_u | RN_u | RN_v), id_v in clear
  ex.rn_v = rng.key128();
  std::vector<std::uint8_t> request;
  for (auto b : encode_id(v)) request.push_back(b);
  for (auto b : encode_id(u)) request.push_back(b);
  request.insert(request.end(), ex.rn_u.bytes.begin(), ex.rn_u.bytes.end());
  request.insert(request.end(), ex.rn_v.bytes.begin(), ex.rn_v.bytes.end());
  const auto v_header = encode_id(v);
  const Key128 sealing_key = faults.wrong_master ? rng.key128() : state.masters.at(v).key;
  SealedBox sealed = aead_seal(sealing_key, nonce96(rng), request, v_header);
  for (std::size_t i = 0; i + 1 < uplink.size(); ++i) {
    state.traffic.send(MessageKind::Case3Request, uplink[i], uplink[i + 1]);
    ++messages;
    if (faults.corrupt_request && i == 0) sealed.ciphertext[0] ^= 0x01;
  }

  // Base station validates under MK_v.
  const auto opened = aead_open(state.masters.at(v).key, sealed, v_header);
  if (!opened || !std::equal(opened->begin(), opened->begin() + 8, encode_id(v).begin()) ||
      !std::equal(opened->begin() + 8, opened->begin() + 16, encode_id(u).begin())) {
    ++state.case3_rejections;
    return Case3Outcome::Rejected;
  }
  const Key128 rn_u_seen = from_bytes(std::span(*opened).subspan(16, 16));
  const Key128 rn_v_seen = from_bytes(std::span(*opened).subspan(32, 16));

  ex.k_uv = rng.key128();
  const auto u_header = encode_id(u);
  ex.protected_u = aead_seal(state.masters.at(u).key, nonce96(rng),
                             to_bytes(ex.k_uv ^ id_block(u) ^ rn_u_seen), u_header);
  ex.protected_v = aead_seal(state.masters.at(v).key, nonce96(rng),
                             to_bytes(ex.k_uv ^ id_block(v) ^ rn_v_seen), v_header);

  // Both copies ride back down the same route; v hands u its copy.
  for (std::size_t i = uplink.size() - 1; i > 0; --i) {
    state.traffic.send(MessageKind::Case3Response, uplink[i], uplink[i - 1]);
    ++messages;
  }
  state.traffic.send(MessageKind::Case3Response, v, u);
  ++messages;

  const auto plain_v = aead_open(state.masters.at(v).key, ex.protected_v, v_header);
  const auto plain_u = aead_open(state.masters.at(u).key, ex.protected_u, u_header);
  if (!plain_u || !plain_v) {
    ++state.case3_rejections;
    return Case3Outcome::Rejected;
  }
  const Key128 key_v = from_bytes(*plain_v) ^ (id_block(v) ^ ex.rn_v);
  const Key128 key_u = from_bytes(*plain_u) ^ (id_block(u) ^ ex.rn_u);
  state.established.insert(u, key_u, v, key_v, KeyMethod::BsCase3);
  ex.hops = messages;
  state.case3_exchanges.push_back(std::move(ex));
  return Case3Outcome::Established;
}

Case3Summary establish_all_case3(NetworkState& state, const Deployment& dep,
                                 const AdjacencyGraph& graph, Rng& rng) {
  Case3Summary summary;
  for (const auto& n : dep.nodes()) {
    if (!n.active || n.kind != NodeKind::RegularSensor || !n.misdeployed) continue;
    for (NodeId v : graph.neighbors(n.id)) {
      if (!qualifies_as_case3_peer(dep, n, dep.node(v))) continue;
      if (state.established.contains(n.id, v)) continue;
      switch (establish_case3(state, dep, graph, n.id, v, rng)) {
        case Case3Outcome::Established:
          ++summary.established;
          break;
        case Case3Outcome::Rejected:
          ++summary.rejected;
          break;
        case Case3Outcome::Deferred:
          ++summary.deferred;
          break;
        case Case3Outcome::AlreadyKeyed:
          break;
      }
    }
  }
  return summary;
}

Case3Summary run_establishment(NetworkState& state, const Deployment& dep,
                               const AdjacencyGraph& graph, Rng& rng) {
  establish_inter_group(state, dep, graph);
  establish_intra_group(state, dep, graph);
  return establish_all_case3(state, dep, graph, rng);
}

NodeId add_sensor(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                  std::size_t group, Rng& rng) {
  if (group >= dep.group_count()) throw ConfigError("group index out of range");
  const Point o = dep.cell_origin(group);
  const double side = dep.config().cell_side();
  const NodeId id = dep.add_sensor(group, {o.x + rng.uniform01() * side,
                                           o.y + rng.uniform01() * side});
  require_id_fits_field(state.params, id);
  state.masters.generate(id, rng);

  auto& pool = state.server.pools[group];
  const std::size_t size = std::min(state.params.m, pool.size());
  state.sensor_rings.emplace(id, build_sensor_ring(id, pool, size, state.masters, rng));
  pool.push_back(id);

  graph.add_node(dep, id);
  say_hello(state, id);
  for (NodeId v : graph.neighbors(id)) intra_pair(state, dep, id, v);
  return id;
}

void remove_head(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                 std::size_t group) {
  if (group >= dep.group_count()) throw ConfigError("group index out of range");
  const NodeId gh = dep.head(group);
  if (!gh.valid()) throw ConfigError("group " + std::to_string(group) + " has no active head");
  state.established.erase_incident(gh);
  state.head_rings.erase(gh);
  std::erase(state.server.pools[group], gh);
  dep.deactivate(gh);
  graph.remove_node(gh);
}

NodeId replace_head(NetworkState& state, Deployment& dep, AdjacencyGraph& graph,
                    std::size_t group, Rng& rng) {
  if (group >= dep.group_count()) throw ConfigError("group index out of range");
  if (dep.head(group).valid()) {
    throw ConfigError("group " + std::to_string(group) +
                      " still has an active head; remove it before replacing");
  }
  const Point c = dep.cell_center(group);
  const double jitter = dep.config().head_placement_jitter;
  const NodeId id =
      dep.add_head(group, {c.x + rng.uniform(-jitter, jitter) / 2.0,
                           c.y + rng.uniform(-jitter, jitter) / 2.0});
  require_id_fits_field(state.params, id);
  state.masters.generate(id, rng);

  auto& pool = state.server.pools[group];
  const std::size_t size = std::min(state.params.m_prime, pool.size());
  state.head_rings.emplace(
      id, build_head_ring(id, pool, size, std::min(size, state.params.m),
                          derive_share(state.server.poly, id), state.masters, rng));
  pool.push_back(id);

  graph.add_node(dep, id);
  for (NodeId v : graph.neighbors(id)) {
    if (dep.node(v).kind == NodeKind::GroupHead) inter_pair(state, dep, id, v);
  }
  say_hello(state, id);
  for (NodeId v : graph.neighbors(id)) intra_pair(state, dep, id, v);
  return id;
}

}  // namespace hwsnkey
