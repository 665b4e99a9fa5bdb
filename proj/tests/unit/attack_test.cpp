#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hwsnkey/attack.hpp"
#include "hwsnkey/error.hpp"

namespace hwsnkey {
namespace {

struct Scene {
  Deployment dep;
  AdjacencyGraph graph;
};

Scene scene(std::size_t sensors, std::uint64_t seed, double misdeploy = 0.0) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = sensors;
  cfg.seed = seed;
  Deployment dep = deploy(cfg, misdeploy);
  AdjacencyGraph graph = discover_neighbors(dep);
  return {std::move(dep), std::move(graph)};
}

NetworkState proposed(const Scene& s, std::uint64_t seed, bool establish = true) {
  SchemeParams p;
  p.m = 40;
  p.m_prime = 80;
  p.t = 20;
  Rng rng(seed, "test.attack.keys");
  NetworkState state = predistribute(s.dep, p, rng, false);
  if (establish) run_establishment(state, s.dep, s.graph, rng);
  return state;
}

BaselineNetwork baseline(const Scene& s, BaselineParams p, std::uint64_t seed) {
  Rng rng(seed, "test.attack.baseline");
  return baseline_predistribute(p, s.dep, s.graph, rng);
}

TEST(AttackTest, VictimsAreNestedAndInPopulation) {
  auto s = scene(50, 1);
  const auto small = sample_victims(s.dep, CaptureTarget::RegularSensors, 10, 7, 0);
  const auto large = sample_victims(s.dep, CaptureTarget::RegularSensors, 40, 7, 0);
  ASSERT_EQ(small.size(), 10u);
  ASSERT_EQ(large.size(), 40u);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
  std::set<NodeId> unique(large.begin(), large.end());
  EXPECT_EQ(unique.size(), 40u);
  for (NodeId id : large) {
    EXPECT_EQ(s.dep.node(id).kind, NodeKind::RegularSensor);
  }

  const auto heads = sample_victims(s.dep, CaptureTarget::GroupHeads, 9, 7, 0);
  for (NodeId id : heads) {
    EXPECT_EQ(s.dep.node(id).kind, NodeKind::GroupHead);
  }
  EXPECT_NE(sample_victims(s.dep, CaptureTarget::RegularSensors, 10, 7, 1), small);
}

TEST(AttackTest, CaptureBeyondPopulationThrows) {
  auto s = scene(10, 1);
  EXPECT_THROW(sample_victims(s.dep, CaptureTarget::RegularSensors, 91, 1, 0), ConfigError);
  EXPECT_THROW(sample_victims(s.dep, CaptureTarget::GroupHeads, 10, 1, 0), ConfigError);
  EXPECT_NO_THROW(sample_victims(s.dep, CaptureTarget::RegularSensors, 90, 1, 0));
}

TEST(AttackTest, ProposedSchemeNeverLeaksSurvivorLinks) {
  auto s = scene(60, 4, 0.1);
  auto state = proposed(s, 4);
  for (std::size_t c : {1u, 30u, 120u, 270u}) {
    AttackSpec spec;
    spec.captured = c;
    spec.trials = 50;
    spec.seed = 9;
    const auto r = capture_and_measure(state, s.dep, spec);
    ASSERT_EQ(r.per_trial.size(), 50u);
    for (std::size_t i = 0; i < r.per_trial.size(); ++i) {
      EXPECT_EQ(r.per_trial[i], 0.0);
      EXPECT_GT(r.links_considered[i], 0u);
    }
    EXPECT_EQ(r.fraction_compromised, 0.0);
  }
}

TEST(AttackTest, ProposedHeadCaptureDoesNotBreakPolynomialBelowThreshold) {
  auto s = scene(30, 2);
  auto state = proposed(s, 2);
  AttackSpec spec;
  spec.target = CaptureTarget::GroupHeads;
  spec.captured = 9;
  spec.trials = 3;
  const auto r = capture_and_measure(state, s.dep, spec);
  EXPECT_EQ(r.fraction_compromised, 0.0);
}

TEST(AttackTest, BlundoFallsAtThresholdPlusOne) {
  auto s = scene(20, 5);
  BaselineParams p;
  p.scheme = BaselineScheme::Blundo;
  p.t = 10;
  auto net = baseline(s, p, 5);
  AttackSpec spec;
  spec.trials = 5;
  spec.captured = 10;
  EXPECT_EQ(capture_and_measure(net, s.dep, spec).fraction_compromised, 0.0);
  spec.captured = 11;
  const auto r = capture_and_measure(net, s.dep, spec);
  for (double f : r.per_trial) {
    EXPECT_EQ(f, 1.0);
  }
}

TEST(AttackTest, RandomPairwiseLeaksNothingBetweenSurvivors) {
  auto s = scene(20, 6);
  BaselineParams p;
  p.scheme = BaselineScheme::RandomPairwise;
  p.m = 100;
  p.p = 0.5;
  auto net = baseline(s, p, 6);
  AttackSpec spec;
  spec.captured = 50;
  spec.trials = 5;
  EXPECT_EQ(capture_and_measure(net, s.dep, spec).fraction_compromised, 0.0);
}

TEST(AttackTest, EgTracksOracleAndIsMonotone) {
  auto s = scene(150, 8);
  BaselineParams p;
  p.pool_size = 1000;
  p.m = 20;
  auto net = baseline(s, p, 8);
  double prev = -1.0;
  for (std::size_t c : {0u, 5u, 20u, 60u}) {
    AttackSpec spec;
    spec.captured = c;
    spec.trials = 10;
    spec.seed = 3;
    const auto r = capture_and_measure(net, s.dep, spec);
    EXPECT_NEAR(r.fraction_compromised, eg_compromise_oracle(20, 1000, c), 0.04) << c;
    EXPECT_GE(r.fraction_compromised, prev);
    prev = r.fraction_compromised;
  }
}

TEST(AttackTest, QCompositeNeedsEveryFeedingKey) {
  auto s = scene(150, 8);
  BaselineParams p;
  p.scheme = BaselineScheme::QComposite;
  p.pool_size = 400;
  p.m = 30;
  p.q_threshold = 2;
  auto net = baseline(s, p, 8);
  AttackSpec spec;
  spec.captured = 20;
  spec.trials = 5;
  const auto r = capture_and_measure(net, s.dep, spec);
  BaselineParams eg = p;
  eg.scheme = BaselineScheme::EG;
  const auto base = capture_and_measure(baseline(s, eg, 8), s.dep, spec);
  EXPECT_GT(r.fraction_compromised, 0.0);
  EXPECT_LT(r.fraction_compromised, base.fraction_compromised);
}

TEST(AttackTest, HeadCaptureExposesNoSensorPairKeys) {
  auto s = scene(100, 3);
  auto state = proposed(s, 3, false);
  for (std::size_t c = 0; c <= 9; ++c) {
    const auto r = head_capture_initialization(state, s.dep, c, 3, 11);
    ASSERT_TRUE(r.sensor_keys_exposed.has_value());
    EXPECT_EQ(*r.sensor_keys_exposed, 0.0);
    EXPECT_EQ(r.fraction_compromised, 0.0);
    if (c > 0) {
      EXPECT_GT(*r.head_incident_keys_exposed, 0.0);
    }
    EXPECT_EQ(lekm_exposed_sensor_keys(c), 100.0 * static_cast<double>(c));
    EXPECT_EQ(ikdm_exposed_sensor_keys(c), 0.0);
  }
}

TEST(AttackTest, EgOracle) {
  EXPECT_EQ(eg_compromise_oracle(200, 100000, 0), 0.0);
  EXPECT_NEAR(eg_compromise_oracle(200, 100000, 100), 1.0 - std::pow(0.998, 100), 1e-15);
  EXPECT_THROW(eg_compromise_oracle(10, 5, 1), ConfigError);
}

}  // namespace
}  // namespace hwsnkey
