#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hwsnkey/baselines.hpp"
#include "hwsnkey/deployment.hpp"
#include "hwsnkey/protocol.hpp"

namespace hwsnkey {

enum class CaptureTarget : std::uint8_t { RegularSensors, GroupHeads };
enum class CapturePhase : std::uint8_t { PostEstablishment, Initialization };

struct AttackSpec {
  CaptureTarget target = CaptureTarget::RegularSensors;
  std::size_t captured = 0;  // c
  CapturePhase phase = CapturePhase::PostEstablishment;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
};

struct ResilienceReport {
  std::string scheme;
  std::size_t captured = 0;
  // Mean fraction of established links between non-captured nodes whose key
  // the adversary can produce.
  double fraction_compromised = 0.0;
  double std_error = 0.0;
  std::vector<double> per_trial;
  std::vector<std::size_t> links_considered;  // denominator per trial
  // Head capture during initialization: pre-loaded keys between two
  // non-captured sensors that became known (N_cluster-head(c)), and keys
  // with a captured head on one side.
  std::optional<double> sensor_keys_exposed;
  std::optional<double> head_incident_keys_exposed;
};

// Victims for trial i are the first c entries of a Fisher-Yates shuffle of
// the target population drawn from stream (seed, "attack.victims", i), so
// victim sets are nested in c for a fixed seed. Throws ConfigError when c
// exceeds the population.
std::vector<NodeId> sample_victims(const Deployment& dep, CaptureTarget target,
                                   std::size_t captured, std::uint64_t seed,
                                   std::size_t trial);

// The adversary takes everything victims store (master keys, rings, shares,
// and, after establishment, established keys) and derives whatever follows:
// PRF keys under a captured master key, and every polynomial key once t+1
// shares are in hand.
ResilienceReport capture_and_measure(const NetworkState& state, const Deployment& dep,
                                     const AttackSpec& spec);

// Baseline counterpart: eg / q-composite links fall when every pool key
// feeding the link key is in some victim ring; blundo links fall once t+1
// shares are captured; random-pairwise keys only through direct storage.
ResilienceReport capture_and_measure(const BaselineNetwork& net, const Deployment& dep,
                                     const AttackSpec& spec);

// Group-head capture before any link is established.
ResilienceReport head_capture_initialization(const NetworkState& state, const Deployment& dep,
                                             std::size_t captured, std::size_t trials,
                                             std::uint64_t seed);

// Curve-level models for schemes that are not simulated.
double lekm_exposed_sensor_keys(std::size_t captured_heads, std::size_t sensors_per_cluster = 100);
double ikdm_exposed_sensor_keys(std::size_t captured_heads);

// Expected eg compromise fraction with one pool key per link: 1 - (1 - m/M)^c.
double eg_compromise_oracle(std::size_t m, std::size_t M, std::size_t captured);

}  // namespace hwsnkey
