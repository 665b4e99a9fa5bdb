#include "hwsnkey/attack.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "hwsnkey/error.hpp"

namespace hwsnkey {
namespace {

class VictimSet {
 public:
  explicit VictimSet(const std::vector<NodeId>& ids) {
    for (NodeId id : ids) {
      if (id.value >= flags_.size()) flags_.resize(id.value + 1, false);
      flags_[id.value] = true;
    }
  }
  bool contains(NodeId id) const { return id.value < flags_.size() && flags_[id.value]; }

 private:
  std::vector<bool> flags_;
};

using KeySet = std::unordered_set<Key128, Key128Hash>;

void finish(ResilienceReport& r) {
  const auto n = r.per_trial.size();
  if (n == 0) return;
  double sum = 0.0;
  for (double v : r.per_trial) sum += v;
  r.fraction_compromised = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : r.per_trial) ss += (v - r.fraction_compromised) * (v - r.fraction_compromised);
    r.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
}

void record_trial(ResilienceReport& r, std::size_t compromised, std::size_t considered) {
  r.links_considered.push_back(considered);
  r.per_trial.push_back(considered == 0 ? 0.0
                                        : static_cast<double>(compromised) /
                                              static_cast<double>(considered));
}

void hold_incident_keys(const LinkLedger& ledger, const VictimSet& victims, KeySet& held) {
  ledger.for_each([&](const LinkRecord& rec) {
    if (victims.contains(rec.low)) held.insert(rec.key_at_low);
    if (victims.contains(rec.high)) held.insert(rec.key_at_high);
  });
}

std::optional<BivariatePolynomial> try_reconstruct(const std::vector<PolynomialShare>& shares,
                                                   std::size_t t) {
  if (shares.size() < t + 1) return std::nullopt;
  return lagrange_reconstruct(shares, t);
}

// Once t+1 shares are captured the reconstruction is exact, and every key
// derived from the polynomial follows.
bool polynomial_recovered(const std::vector<PolynomialShare>& shares, std::size_t t,
                          const BivariatePolynomial& truth) {
  const auto recovered = try_reconstruct(shares, t);
  return recovered && *recovered == truth;
}

}  // namespace

std::vector<NodeId> sample_victims(const Deployment& dep, CaptureTarget target,
                                   std::size_t captured, std::uint64_t seed,
                                   std::size_t trial) {
  const NodeKind kind =
      target == CaptureTarget::GroupHeads ? NodeKind::GroupHead : NodeKind::RegularSensor;
  std::vector<NodeId> population;
  for (const auto& n : dep.nodes()) {
    if (n.active && n.kind == kind) population.push_back(n.id);
  }
  if (captured > population.size()) {
    throw ConfigError("attack.captured: " + std::to_string(captured) + " exceeds the " +
                      std::to_string(population.size()) + " available targets");
  }
  Rng rng(seed, "attack.victims", trial);
  return sample_without_replacement<NodeId>(population, captured, rng);
}

ResilienceReport capture_and_measure(const NetworkState& state, const Deployment& dep,
                                     const AttackSpec& spec) {
  ResilienceReport report;
  report.scheme = "proposed";
  report.captured = spec.captured;
  const bool post = spec.phase == CapturePhase::PostEstablishment;

  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    const auto victim_ids = sample_victims(dep, spec.target, spec.captured, spec.seed, trial);
    const VictimSet victims(victim_ids);

    KeySet held;
    std::vector<PolynomialShare> shares;
    for (NodeId id : victim_ids) {
      held.insert(state.masters.at(id).key);
      if (const KeyRing* ring = state.ring_of(id)) {
        for (const auto& e : ring->entries) held.insert(e.key);
      }
      if (auto it = state.head_rings.find(id); it != state.head_rings.end()) {
        shares.push_back(it->second.share);
      }
    }
    if (post) hold_incident_keys(state.established, victims, held);
    const bool poly_broken = polynomial_recovered(shares, state.params.t, state.server.poly);

    std::size_t considered = 0;
    std::size_t compromised = 0;
    state.established.for_each([&](const LinkRecord& rec) {
      if (victims.contains(rec.low) || victims.contains(rec.high)) return;
      ++considered;
      bool known = held.contains(rec.key_at_low) || held.contains(rec.key_at_high);
      if (!known && rec.prf_keyholder.valid() && victims.contains(rec.prf_keyholder)) {
        known = true;
      }
      if (!known && rec.method == KeyMethod::Poly) known = poly_broken;
      compromised += known;
    });
    record_trial(report, compromised, considered);
  }
  finish(report);
  return report;
}

ResilienceReport capture_and_measure(const BaselineNetwork& net, const Deployment& dep,
                                     const AttackSpec& spec) {
  ResilienceReport report;
  report.scheme = std::string(to_string(net.params.scheme));
  report.captured = spec.captured;
  const bool post = spec.phase == CapturePhase::PostEstablishment;

  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    const auto victim_ids = sample_victims(dep, spec.target, spec.captured, spec.seed, trial);
    const VictimSet victims(victim_ids);

    KeySet held;
    std::vector<bool> pool_known;
    std::vector<PolynomialShare> shares;
    switch (net.params.scheme) {
      case BaselineScheme::EG:
      case BaselineScheme::QComposite:
        pool_known.assign(net.key_pool.size(), false);
        for (NodeId id : victim_ids) {
          for (auto k : net.key_rings.at(id)) pool_known[k] = true;
        }
        break;
      case BaselineScheme::Blundo:
        for (NodeId id : victim_ids) shares.push_back(net.shares.at(id));
        break;
      case BaselineScheme::RandomPairwise:
        for (NodeId id : victim_ids) {
          for (const auto& e : net.pair_rings.at(id)) held.insert(e.key);
        }
        break;
    }
    if (post) hold_incident_keys(net.established, victims, held);
    const bool poly_broken = net.params.scheme == BaselineScheme::Blundo && net.poly &&
                             polynomial_recovered(shares, net.params.t, *net.poly);

    std::size_t considered = 0;
    std::size_t compromised = 0;
    net.established.for_each([&](const LinkRecord& rec) {
      if (victims.contains(rec.low) || victims.contains(rec.high)) return;
      ++considered;
      bool known = held.contains(rec.key_at_low) || held.contains(rec.key_at_high);
      if (!known && !pool_known.empty()) {
        const auto& inputs = net.link_inputs.at(LinkLedger::pair_key(rec.low, rec.high));
        known = std::all_of(inputs.begin(), inputs.end(),
                            [&](std::uint32_t k) { return pool_known[k]; });
      }
      if (!known) known = poly_broken;
      compromised += known;
    });
    record_trial(report, compromised, considered);
  }
  finish(report);
  return report;
}

ResilienceReport head_capture_initialization(const NetworkState& state, const Deployment& dep,
                                             std::size_t captured, std::size_t trials,
                                             std::uint64_t seed) {
  ResilienceReport report;
  report.scheme = "proposed";
  report.captured = captured;
  double sensor_total = 0.0;
  double head_total = 0.0;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto victim_ids =
        sample_victims(dep, CaptureTarget::GroupHeads, captured, seed, trial);
    const VictimSet victims(victim_ids);

    KeySet held;
    std::size_t head_incident = 0;
    for (NodeId id : victim_ids) {
      const auto& ring = state.head_rings.at(id);
      held.insert(ring.master.key);
      for (const auto& e : ring.entries) held.insert(e.key);
      head_incident += ring.entries.size();
    }

    // Pre-loaded sensor keys: each ring entry of a non-captured sensor.
    std::size_t sensor_sensor = 0;
    std::size_t exposed = 0;
    for (const auto& [id, ring] : state.sensor_rings) {
      if (!dep.is_active(id)) continue;
      for (const auto& e : ring.entries) {
        const bool derivable = victims.contains(e.peer) || held.contains(e.key);
        if (victims.contains(e.peer)) {
          head_incident += derivable;
          continue;
        }
        ++sensor_sensor;
        exposed += derivable;
      }
    }
    sensor_total += static_cast<double>(exposed);
    head_total += static_cast<double>(head_incident);
    record_trial(report, exposed, sensor_sensor);
  }
  finish(report);
  if (trials > 0) {
    report.sensor_keys_exposed = sensor_total / static_cast<double>(trials);
    report.head_incident_keys_exposed = head_total / static_cast<double>(trials);
  }
  return report;
}

double lekm_exposed_sensor_keys(std::size_t captured_heads, std::size_t sensors_per_cluster) {
  return static_cast<double>(captured_heads) * static_cast<double>(sensors_per_cluster);
}

double ikdm_exposed_sensor_keys(std::size_t) { return 0.0; }

double eg_compromise_oracle(std::size_t m, std::size_t M, std::size_t captured) {
  if (M == 0 || m > M) throw ConfigError("eg_compromise_oracle: need 0 < m <= M");
  return 1.0 - std::pow(1.0 - static_cast<double>(m) / static_cast<double>(M),
                        static_cast<double>(captured));
}

}  // namespace hwsnkey
