#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <boost/rational.hpp>

#include "hwsnkey/deployment.hpp"
#include "hwsnkey/protocol.hpp"

namespace hwsnkey {

using Probability = boost::rational<std::int64_t>;

// Probability that a given node's id sits in another node's ring of
// `ring_size` ids drawn from a pool of n_i + 1: m / (n_i + 1), or 1 once the
// ring covers the pool.
Probability ring_inclusion_probability(std::size_t n_i, std::size_t ring_size);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct ConnectivityReport {
  // Analytical values.
  double p1 = 0.0;
  double p2 = 0.0;
  double p_sensor_sensor = 0.0;
  double p_grouphead_sensor = 0.0;
  double p_grouphead_grouphead = 1.0;
  double p_overall = 0.0;
  // (n_i p_ss + 2 p_gs) / (n_i + 1). It counts the head's d links both among
  // the n_i d / 2 sensor edges and in the head term, so it exceeds 1 near
  // saturation; p_overall splits the edges as (n_i - 1) d / 2 + d instead.
  double p_overall_raw = 0.0;

  // Simulated counterparts; empty when no adjacent pair of that kind exists.
  std::optional<Estimate> sim_p1;
  std::optional<Estimate> sim_p2;
  std::optional<Estimate> sim_sensor_sensor;
  std::optional<Estimate> sim_grouphead_sensor;
  std::optional<Estimate> sim_grouphead_grouphead;
  std::optional<Estimate> sim_overall;

  std::size_t trials = 0;
  double mean_degree = 0.0;       // d, over regular sensors
  double mean_head_degree = 0.0;  // same-group sensor neighbors per head
  std::size_t groups_excluded = 0;
};

// Closed forms: p1, p2 from ring_inclusion_probability;
// p_ss = 1 - (1 - p1)^2; p_gs = 1 - (1 - p1)(1 - p2); p_gg = 1;
// p_overall = ((n_i - 1) p_ss + 2 p_gs) / (n_i + 1).
ConnectivityReport connectivity_closed_form(std::size_t n_i, std::size_t m,
                                            std::size_t m_prime);

// Measures, per group, the secured fraction of adjacent same-group pairs
// split by pair kind, then averages over groups (standard error across
// groups). Groups without any adjacent pair are excluded and counted.
ConnectivityReport connectivity_simulate(const NetworkState& state, const Deployment& dep,
                                         const AdjacencyGraph& graph);

}  // namespace hwsnkey
