#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hwsnkey/types.hpp"

namespace hwsnkey {

enum class BaseStationPlacement : std::uint8_t { Corner, Center };

// Square target field cut into groups_per_side x groups_per_side equal
// square cells, one group per cell. Distances are in meters.
struct DeploymentConfig {
  double field_side = 300.0;
  std::size_t groups_per_side = 3;
  std::size_t sensors_per_group = 200;
  double radio_range_sensor = 30.0;
  double radio_range_head = 150.0;
  double head_placement_jitter = 5.0;
  BaseStationPlacement base_station = BaseStationPlacement::Corner;
  std::uint64_t seed = 1;

  std::size_t group_count() const { return groups_per_side * groups_per_side; }
  double cell_side() const { return field_side / static_cast<double>(groups_per_side); }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

inline constexpr int kNoGroup = -1;

struct NodeRecord {
  NodeId id;
  NodeKind kind = NodeKind::RegularSensor;
  int home_group = kNoGroup;  // group whose pool provisioned this node
  int cell = kNoGroup;        // group cell the node physically sits in
  Point pos;
  bool misdeployed = false;
  bool active = true;
};

// Node placement snapshot. Ids are consecutive from 1: the base station
// first, then one head per group, then sensors group by group. Nodes added
// later take the next free id.
class Deployment {
 public:
  explicit Deployment(DeploymentConfig cfg);

  const DeploymentConfig& config() const { return cfg_; }
  std::size_t group_count() const { return heads_.size(); }

  std::span<const NodeRecord> nodes() const { return nodes_; }
  const NodeRecord& node(NodeId id) const;
  bool contains(NodeId id) const { return id.valid() && id.value <= nodes_.size(); }
  bool is_active(NodeId id) const { return contains(id) && node(id).active; }

  NodeId base_station() const { return base_station_; }
  // Current head of a group; invalid after the head is deactivated.
  NodeId head(std::size_t group) const { return heads_.at(group); }
  // Sensors provisioned for a group (including misdeployed ones), in id order.
  std::span<const NodeId> sensors_of(std::size_t group) const { return members_.at(group); }

  double range_of(NodeId id) const;
  int cell_of(Point p) const;
  Point cell_origin(std::size_t group) const;
  Point cell_center(std::size_t group) const;
  // Groups sharing an edge with `group`, ascending.
  std::vector<std::size_t> adjacent_cells(std::size_t group) const;

  NodeId add_base_station(Point pos);
  NodeId add_head(std::size_t group, Point pos);
  NodeId add_sensor(std::size_t home_group, Point pos);
  void deactivate(NodeId id);

  // node_id,kind,group,x,y,misdeployed ; active nodes only.
  std::string to_csv() const;

 private:
  NodeId append(NodeRecord rec);

  DeploymentConfig cfg_;
  std::vector<NodeRecord> nodes_;
  NodeId base_station_;
  std::vector<NodeId> heads_;
  std::vector<std::vector<NodeId>> members_;
};

// Heads land at their cell center plus a uniform offset in a disc of radius
// head_placement_jitter; sensors land uniformly in their cell, except that
// each sensor independently with probability misdeploy_fraction lands
// uniformly in a uniformly chosen edge-adjacent cell and is flagged.
Deployment deploy(const DeploymentConfig& cfg, double misdeploy_fraction = 0.0);

// Undirected radio graph: u ~ v iff dist(u, v) <= min(range_u, range_v).
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;

  std::span<const NodeId> neighbors(NodeId id) const;
  bool adjacent(NodeId u, NodeId v) const;
  std::size_t edge_count() const { return edge_count_; }
  // Every edge once as (smaller id, larger id), sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Mean number of active neighbors over active regular sensors.
  double mean_sensor_degree(const Deployment& dep) const;

  // Incremental maintenance for dynamic node addition and removal.
  void add_node(const Deployment& dep, NodeId id);
  void remove_node(NodeId id);

  friend AdjacencyGraph discover_neighbors(const Deployment& dep);

 private:
  void link(NodeId u, NodeId v);
  void finalize();

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

// Simulates the HELLO exchange over all active nodes using a uniform grid
// index sized to the shortest radio range.
AdjacencyGraph discover_neighbors(const Deployment& dep);

}  // namespace hwsnkey
