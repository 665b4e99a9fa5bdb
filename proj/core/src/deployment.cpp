#include "hwsnkey/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "hwsnkey/error.hpp"
#include "hwsnkey/rng.hpp"

namespace hwsnkey {

void DeploymentConfig::validate() const {
  if (!(field_side > 0.0)) throw ConfigError("deployment.field_side: must be > 0");
  if (groups_per_side < 1) throw ConfigError("deployment.groups_per_side: must be >= 1");
  if (sensors_per_group < 1) throw ConfigError("deployment.sensors_per_group: must be >= 1");
  if (!(radio_range_sensor > 0.0)) {
    throw ConfigError("deployment.radio_range_sensor: must be > 0");
  }
  if (!(radio_range_head > 0.0)) throw ConfigError("deployment.radio_range_head: must be > 0");
  if (!(head_placement_jitter >= 0.0)) {
    throw ConfigError("deployment.head_placement_jitter: must be >= 0");
  }
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Deployment::Deployment(DeploymentConfig cfg)
    : cfg_(cfg), heads_(cfg.group_count()), members_(cfg.group_count()) {}

const NodeRecord& Deployment::node(NodeId id) const {
  if (!contains(id)) throw std::out_of_range("unknown node id " + std::to_string(id.value));
  return nodes_[id.value - 1];
}

double Deployment::range_of(NodeId id) const {
  return node(id).kind == NodeKind::RegularSensor ? cfg_.radio_range_sensor
                                                  : cfg_.radio_range_head;
}

int Deployment::cell_of(Point p) const {
  const double side = cfg_.cell_side();
  const auto n = static_cast<long>(cfg_.groups_per_side);
  const long col = std::clamp(static_cast<long>(std::floor(p.x / side)), 0L, n - 1);
  const long row = std::clamp(static_cast<long>(std::floor(p.y / side)), 0L, n - 1);
  return static_cast<int>(row * n + col);
}

Point Deployment::cell_origin(std::size_t group) const {
  const double side = cfg_.cell_side();
  return {static_cast<double>(group % cfg_.groups_per_side) * side,
          static_cast<double>(group / cfg_.groups_per_side) * side};
}

Point Deployment::cell_center(std::size_t group) const {
  const Point o = cell_origin(group);
  const double half = cfg_.cell_side() / 2.0;
  return {o.x + half, o.y + half};
}

std::vector<std::size_t> Deployment::adjacent_cells(std::size_t group) const {
  const std::size_t n = cfg_.groups_per_side;
  const std::size_t row = group / n;
  const std::size_t col = group % n;
  std::vector<std::size_t> out;
  if (row > 0) out.push_back(group - n);
  if (col > 0) out.push_back(group - 1);
  if (col + 1 < n) out.push_back(group + 1);
  if (row + 1 < n) out.push_back(group + n);
  return out;
}

NodeId Deployment::append(NodeRecord rec) {
  rec.id = NodeId{nodes_.size() + 1};
  if (rec.id.value > 0xFFFFFFFFULL) throw ConfigError("node id space exhausted");
  nodes_.push_back(rec);
  return rec.id;
}

NodeId Deployment::add_base_station(Point pos) {
  if (base_station_.valid()) throw ConfigError("deployment already has a base station");
  NodeRecord rec;
  rec.kind = NodeKind::BaseStation;
  rec.pos = pos;
  base_station_ = append(rec);
  return base_station_;
}

NodeId Deployment::add_head(std::size_t group, Point pos) {
  if (group >= heads_.size()) throw ConfigError("group index out of range");
  if (heads_[group].valid() && is_active(heads_[group])) {
    throw ConfigError("group " + std::to_string(group) + " already has an active head");
  }
  NodeRecord rec;
  rec.kind = NodeKind::GroupHead;
  rec.home_group = static_cast<int>(group);
  rec.cell = cell_of(pos);
  rec.pos = pos;
  heads_[group] = append(rec);
  return heads_[group];
}

NodeId Deployment::add_sensor(std::size_t home_group, Point pos) {
  if (home_group >= members_.size()) throw ConfigError("group index out of range");
  NodeRecord rec;
  rec.kind = NodeKind::RegularSensor;
  rec.home_group = static_cast<int>(home_group);
  rec.cell = cell_of(pos);
  rec.pos = pos;
  rec.misdeployed = rec.cell != rec.home_group;
  const NodeId id = append(rec);
  members_[home_group].push_back(id);
  return id;
}

void Deployment::deactivate(NodeId id) {
  auto& rec = nodes_.at(id.value - 1);
  rec.active = false;
  if (rec.kind == NodeKind::GroupHead && heads_[rec.home_group] == id) {
    heads_[rec.home_group] = NodeId{};
  }
}

std::string Deployment::to_csv() const {
  std::ostringstream out;
  out << "node_id,kind,group,x,y,misdeployed\n";
  char buf[128];
  for (const auto& n : nodes_) {
    if (!n.active) continue;
    std::snprintf(buf, sizeof buf, "%llu,%s,%d,%.17g,%.17g,%d\n",
                  static_cast<unsigned long long>(n.id.value), to_string(n.kind).data(),
                  n.home_group, n.pos.x, n.pos.y, n.misdeployed ? 1 : 0);
    out << buf;
  }
  return out.str();
}

Deployment deploy(const DeploymentConfig& cfg, double misdeploy_fraction) {
  cfg.validate();
  if (!(misdeploy_fraction >= 0.0 && misdeploy_fraction <= 1.0)) {
    throw ConfigError("misdeploy_fraction: must lie in [0, 1]");
  }
  Deployment dep(cfg);
  const double side = cfg.cell_side();

  const Point bs_pos = cfg.base_station == BaseStationPlacement::Corner
                           ? Point{0.0, 0.0}
                           : Point{cfg.field_side / 2.0, cfg.field_side / 2.0};
  dep.add_base_station(bs_pos);

  Rng head_rng(cfg.seed, "deploy.heads");
  for (std::size_t g = 0; g < cfg.group_count(); ++g) {
    const Point c = dep.cell_center(g);
    double dx = 0.0;
    double dy = 0.0;
    if (cfg.head_placement_jitter > 0.0) {
      do {
        dx = head_rng.uniform(-1.0, 1.0);
        dy = head_rng.uniform(-1.0, 1.0);
      } while (dx * dx + dy * dy > 1.0);
    }
    const double reach = std::min(cfg.head_placement_jitter, side / 2.0);
    dep.add_head(g, {c.x + dx * reach, c.y + dy * reach});
  }

  for (std::size_t g = 0; g < cfg.group_count(); ++g) {
    Rng rng(cfg.seed, "deploy.sensors", g);
    const auto neighbors = dep.adjacent_cells(g);
    for (std::size_t i = 0; i < cfg.sensors_per_group; ++i) {
      std::size_t cell = g;
      if (misdeploy_fraction > 0.0 && !neighbors.empty() && rng.bernoulli(misdeploy_fraction)) {
        cell = neighbors[rng.uniform_below(neighbors.size())];
      }
      const Point o = dep.cell_origin(cell);
      dep.add_sensor(g, {o.x + rng.uniform01() * side, o.y + rng.uniform01() * side});
    }
  }
  return dep;
}

// ---------------------------------------------------------------------------

std::span<const NodeId> AdjacencyGraph::neighbors(NodeId id) const {
  if (id.value >= adj_.size()) return {};
  return adj_[id.value];
}

bool AdjacencyGraph::adjacent(NodeId u, NodeId v) const {
  const auto n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> AdjacencyGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (NodeId v : adj_[u]) {
      if (u < v.value) out.emplace_back(NodeId{u}, v);
    }
  }
  return out;
}

double AdjacencyGraph::mean_sensor_degree(const Deployment& dep) const {
  std::size_t sensors = 0;
  std::size_t degree = 0;
  for (const auto& n : dep.nodes()) {
    if (!n.active || n.kind != NodeKind::RegularSensor) continue;
    ++sensors;
    degree += neighbors(n.id).size();
  }
  return sensors == 0 ? 0.0 : static_cast<double>(degree) / static_cast<double>(sensors);
}

void AdjacencyGraph::link(NodeId u, NodeId v) {
  const auto hi = std::max(u.value, v.value);
  if (hi >= adj_.size()) adj_.resize(hi + 1);
  adj_[u.value].push_back(v);
  adj_[v.value].push_back(u);
  ++edge_count_;
}

void AdjacencyGraph::finalize() {
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

void AdjacencyGraph::add_node(const Deployment& dep, NodeId id) {
  if (!dep.is_active(id)) return;
  if (id.value >= adj_.size()) adj_.resize(id.value + 1);
  if (!adj_[id.value].empty()) return;
  const auto& me = dep.node(id);
  const double r = dep.range_of(id);
  for (const auto& other : dep.nodes()) {
    if (!other.active || other.id == id) continue;
    const double reach = std::min(r, dep.range_of(other.id));
    if (distance(me.pos, other.pos) <= reach) {
      link(id, other.id);
      auto& list = adj_[other.id.value];
      std::inplace_merge(list.begin(), list.end() - 1, list.end());
    }
  }
  std::sort(adj_[id.value].begin(), adj_[id.value].end());
}

void AdjacencyGraph::remove_node(NodeId id) {
  if (id.value >= adj_.size()) return;
  for (NodeId v : adj_[id.value]) {
    auto& list = adj_[v.value];
    list.erase(std::lower_bound(list.begin(), list.end(), id));
    --edge_count_;
  }
  adj_[id.value].clear();
}

AdjacencyGraph discover_neighbors(const Deployment& dep) {
  AdjacencyGraph graph;
  graph.adj_.resize(dep.nodes().size() + 1);

  const auto& cfg = dep.config();
  // Cells at least as wide as the shorter range; capped in count for tiny ranges.
  const double cell = std::max(std::min(cfg.radio_range_sensor, cfg.radio_range_head),
                               cfg.field_side / 1024.0);
  const auto cols = static_cast<long>(std::ceil(cfg.field_side / cell)) + 1;
  auto key_of = [&](Point p) {
    const long cx = std::clamp(static_cast<long>(std::floor(p.x / cell)), 0L, cols - 1);
    const long cy = std::clamp(static_cast<long>(std::floor(p.y / cell)), 0L, cols - 1);
    return std::pair{cx, cy};
  };

  std::vector<std::vector<NodeId>> grid(static_cast<std::size_t>(cols * cols));
  std::vector<NodeId> large;
  for (const auto& n : dep.nodes()) {
    if (!n.active) continue;
    auto [cx, cy] = key_of(n.pos);
    grid[static_cast<std::size_t>(cy * cols + cx)].push_back(n.id);
    if (dep.range_of(n.id) > cell) large.push_back(n.id);
  }

  // Pairs with at least one short-range endpoint: scan the 3x3 block around it.
  for (const auto& n : dep.nodes()) {
    if (!n.active || dep.range_of(n.id) > cell) continue;
    auto [cx, cy] = key_of(n.pos);
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        const long x = cx + dx;
        const long y = cy + dy;
        if (x < 0 || y < 0 || x >= cols || y >= cols) continue;
        for (NodeId v : grid[static_cast<std::size_t>(y * cols + x)]) {
          if (v == n.id) continue;
          const bool v_large = dep.range_of(v) > cell;
          if (!v_large && v < n.id) continue;
          const double reach = std::min(dep.range_of(n.id), dep.range_of(v));
          if (distance(n.pos, dep.node(v).pos) <= reach) graph.link(n.id, v);
        }
      }
    }
  }
  // Long-range pairs (heads, base station) by brute force.
  for (std::size_t i = 0; i < large.size(); ++i) {
    for (std::size_t j = i + 1; j < large.size(); ++j) {
      const double reach = std::min(dep.range_of(large[i]), dep.range_of(large[j]));
      if (distance(dep.node(large[i]).pos, dep.node(large[j]).pos) <= reach) {
        graph.link(large[i], large[j]);
      }
    }
  }
  graph.finalize();
  return graph;
}

}  // namespace hwsnkey
