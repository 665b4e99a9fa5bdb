#include "hwsnkey/connectivity.hpp"

#include <cmath>
#include <vector>

#include "hwsnkey/error.hpp"

namespace hwsnkey {

Probability ring_inclusion_probability(std::size_t n_i, std::size_t ring_size) {
  if (ring_size >= n_i + 1) return Probability(1);
  return Probability(static_cast<std::int64_t>(ring_size), static_cast<std::int64_t>(n_i + 1));
}

ConnectivityReport connectivity_closed_form(std::size_t n_i, std::size_t m,
                                            std::size_t m_prime) {
  if (n_i < 1) throw ConfigError("n_i must be >= 1");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (m_prime < m) throw ConfigError("m_prime must be >= m");
  ConnectivityReport r;
  r.p1 = boost::rational_cast<double>(ring_inclusion_probability(n_i, m));
  r.p2 = boost::rational_cast<double>(ring_inclusion_probability(n_i, m_prime));
  r.p_sensor_sensor = 1.0 - (1.0 - r.p1) * (1.0 - r.p1);
  r.p_grouphead_sensor = 1.0 - (1.0 - r.p1) * (1.0 - r.p2);
  r.p_grouphead_grouphead = 1.0;
  const double n = static_cast<double>(n_i);
  r.p_overall = ((n - 1.0) * r.p_sensor_sensor + 2.0 * r.p_grouphead_sensor) / (n + 1.0);
  r.p_overall_raw = (n * r.p_sensor_sensor + 2.0 * r.p_grouphead_sensor) / (n + 1.0);
  return r;
}

namespace {

struct Ratio {
  std::size_t hits = 0;
  std::size_t total = 0;
};

class GroupAverager {
 public:
  void add(const Ratio& r) {
    if (r.total == 0) return;
    values_.push_back(static_cast<double>(r.hits) / static_cast<double>(r.total));
  }
  std::optional<Estimate> estimate() const {
    if (values_.empty()) return std::nullopt;
    Estimate e;
    e.samples = values_.size();
    double sum = 0.0;
    for (double v : values_) sum += v;
    e.mean = sum / static_cast<double>(values_.size());
    if (values_.size() > 1) {
      double ss = 0.0;
      for (double v : values_) ss += (v - e.mean) * (v - e.mean);
      const double var = ss / static_cast<double>(values_.size() - 1);
      e.std_error = std::sqrt(var / static_cast<double>(values_.size()));
    }
    return e;
  }

 private:
  std::vector<double> values_;
};

}  // namespace

ConnectivityReport connectivity_simulate(const NetworkState& state, const Deployment& dep,
                                         const AdjacencyGraph& graph) {
  const std::size_t groups = dep.group_count();
  std::vector<Ratio> ss(groups), gs(groups), overall(groups), p1(groups), p2(groups);
  Ratio gg;
  std::vector<std::size_t> head_degree(groups, 0);

  for (const auto& nu : dep.nodes()) {
    for (NodeId v : graph.neighbors(nu.id)) {
      const NodeId u = nu.id;
      if (v < u) continue;
      const auto& nv = dep.node(v);
      if (!nu.active || !nv.active) continue;
      if (nu.kind == NodeKind::BaseStation || nv.kind == NodeKind::BaseStation) continue;
      const bool secured = state.established.contains(u, v);
      const bool u_head = nu.kind == NodeKind::GroupHead;
      const bool v_head = nv.kind == NodeKind::GroupHead;
      if (u_head && v_head) {
        gg.total++;
        gg.hits += secured;
        continue;
      }
      if (nu.home_group != nv.home_group) continue;
      const auto g = static_cast<std::size_t>(nu.home_group);
      overall[g].total++;
      overall[g].hits += secured;
      const KeyRing* ru = state.ring_of(u);
      const KeyRing* rv = state.ring_of(v);
      if (u_head || v_head) {
        gs[g].total++;
        gs[g].hits += secured;
        head_degree[g]++;
        const KeyRing* head_ring = u_head ? ru : rv;
        if (head_ring) {
          p2[g].total++;
          p2[g].hits += head_ring->holds(u_head ? v : u);
        }
      } else {
        ss[g].total++;
        ss[g].hits += secured;
        if (ru && rv) {
          p1[g].total += 2;
          p1[g].hits += static_cast<std::size_t>(ru->holds(v)) + rv->holds(u);
        }
      }
    }
  }

  ConnectivityReport r;
  GroupAverager a_ss, a_gs, a_all, a_p1, a_p2;
  std::size_t heads_seen = 0;
  double head_degree_sum = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    if (overall[g].total == 0) {
      r.groups_excluded++;
      continue;
    }
    a_ss.add(ss[g]);
    a_gs.add(gs[g]);
    a_all.add(overall[g]);
    a_p1.add(p1[g]);
    a_p2.add(p2[g]);
    if (dep.head(g).valid()) {
      heads_seen++;
      head_degree_sum += static_cast<double>(head_degree[g]);
    }
  }
  r.sim_sensor_sensor = a_ss.estimate();
  r.sim_grouphead_sensor = a_gs.estimate();
  r.sim_overall = a_all.estimate();
  r.sim_p1 = a_p1.estimate();
  r.sim_p2 = a_p2.estimate();
  if (gg.total > 0) {
    r.sim_grouphead_grouphead =
        Estimate{static_cast<double>(gg.hits) / static_cast<double>(gg.total), 0.0, gg.total};
  }
  r.trials = 1;
  r.mean_degree = graph.mean_sensor_degree(dep);
  r.mean_head_degree = heads_seen ? head_degree_sum / static_cast<double>(heads_seen) : 0.0;
  return r;
}

}  // namespace hwsnkey
