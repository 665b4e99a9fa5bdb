#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "hwsnkey/connectivity.hpp"
#include "hwsnkey/error.hpp"

namespace hwsnkey {
namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::rational<BigInt>;

BigInt binom(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigRational widen(const Probability& p) {
  return BigRational(BigInt(p.numerator()), BigInt(p.denominator()));
}

// Drawing a ring of `m` ids uniformly from a pool of n + 1: chance that a
// fixed id is missed is C(n, m) / C(n + 1, m).
BigRational miss_probability(unsigned n, unsigned m) {
  return BigRational(binom(n, m), binom(n + 1, m));
}

TEST(ConnectivityTest, InclusionEqualsHypergeometricExactly) {
  for (unsigned n = 1; n <= 30; ++n) {
    for (unsigned m = 1; m <= n + 1; ++m) {
      const BigRational miss = miss_probability(n, m);
      EXPECT_EQ(widen(ring_inclusion_probability(n, m)), BigRational(1) - miss) << n << "," << m;
      // Two independent rings, either one holding the other's id.
      const Probability p1 = ring_inclusion_probability(n, m);
      const Probability p_ss = Probability(1) - (Probability(1) - p1) * (Probability(1) - p1);
      EXPECT_EQ(widen(p_ss), BigRational(1) - miss * miss);
    }
  }
}

TEST(ConnectivityTest, InclusionSaturates) {
  EXPECT_EQ(ring_inclusion_probability(10, 11), Probability(1));
  EXPECT_EQ(ring_inclusion_probability(10, 500), Probability(1));
  EXPECT_EQ(ring_inclusion_probability(10, 10), Probability(10, 11));
}

TEST(ConnectivityTest, ClosedFormValues) {
  auto r = connectivity_closed_form(999, 200, 300);
  EXPECT_DOUBLE_EQ(r.p1, 0.2);
  EXPECT_DOUBLE_EQ(r.p2, 0.3);
  EXPECT_NEAR(r.p_sensor_sensor, 0.36, 1e-15);
  EXPECT_NEAR(r.p_grouphead_sensor, 0.44, 1e-15);
  EXPECT_EQ(r.p_grouphead_grouphead, 1.0);
  EXPECT_NEAR(r.p_overall, (998 * 0.36 + 2 * 0.44) / 1000.0, 1e-15);
  EXPECT_NEAR(r.p_overall_raw, (999 * 0.36 + 2 * 0.44) / 1000.0, 1e-15);

  r = connectivity_closed_form(220, 200, 200);
  EXPECT_DOUBLE_EQ(r.p1, 200.0 / 221.0);
  EXPECT_DOUBLE_EQ(r.p2, 200.0 / 221.0);
}

TEST(ConnectivityTest, ClosedFormAtSaturation) {
  const auto r = connectivity_closed_form(150, 200, 300);
  EXPECT_EQ(r.p1, 1.0);
  EXPECT_EQ(r.p_sensor_sensor, 1.0);
  EXPECT_EQ(r.p_grouphead_sensor, 1.0);
  EXPECT_EQ(r.p_overall, 1.0);
  EXPECT_GT(r.p_overall_raw, 1.0);
}

TEST(ConnectivityTest, ClosedFormMonotonicity) {
  double prev = 2.0;
  for (std::size_t n = 250; n <= 1000; n += 50) {
    const double p = connectivity_closed_form(n, 200, 200).p_overall;
    EXPECT_LT(p, prev);
    prev = p;
  }
  prev = -1.0;
  for (std::size_t mp = 200; mp <= 800; mp += 100) {
    const double p = connectivity_closed_form(800, 200, mp).p_grouphead_sensor;
    EXPECT_GT(p, prev);
    prev = p;
  }
}

TEST(ConnectivityTest, ClosedFormRejectsBadInput) {
  EXPECT_THROW(connectivity_closed_form(0, 1, 1), ConfigError);
  EXPECT_THROW(connectivity_closed_form(10, 0, 1), ConfigError);
  EXPECT_THROW(connectivity_closed_form(10, 5, 4), ConfigError);
}

struct Run {
  Deployment dep;
  AdjacencyGraph graph;
  NetworkState state;
};

Run run(DeploymentConfig cfg, SchemeParams p, std::uint64_t seed) {
  cfg.seed = seed;
  Deployment dep = deploy(cfg);
  AdjacencyGraph graph = discover_neighbors(dep);
  Rng rng(seed, "test.connectivity");
  NetworkState state = predistribute(dep, p, rng, false);
  run_establishment(state, dep, graph, rng);
  return {std::move(dep), std::move(graph), std::move(state)};
}

TEST(ConnectivityTest, SimulatedSaturationIsExactlyOne) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = 120;
  SchemeParams p;
  p.m = 121;
  p.m_prime = 121;
  p.t = 10;
  auto r = run(cfg, p, 2);
  const auto rep = connectivity_simulate(r.state, r.dep, r.graph);
  ASSERT_TRUE(rep.sim_sensor_sensor.has_value());
  EXPECT_EQ(rep.sim_sensor_sensor->mean, 1.0);
  EXPECT_EQ(rep.sim_overall->mean, 1.0);
  EXPECT_EQ(rep.sim_grouphead_grouphead->mean, 1.0);
}

TEST(ConnectivityTest, SimulatedTracksClosedForm) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = 300;
  SchemeParams p;
  p.m = 60;
  p.m_prime = 90;
  p.t = 10;
  auto r = run(cfg, p, 7);
  const auto rep = connectivity_simulate(r.state, r.dep, r.graph);
  const auto cf = connectivity_closed_form(300, 60, 90);
  EXPECT_NEAR(rep.sim_sensor_sensor->mean, cf.p_sensor_sensor, 0.03);
  EXPECT_NEAR(rep.sim_overall->mean, cf.p_overall, 0.03);
  EXPECT_GT(rep.mean_degree, 0.0);
  EXPECT_EQ(rep.groups_excluded, 0u);
  EXPECT_EQ(rep.sim_sensor_sensor->samples, 9u);
}

TEST(ConnectivityTest, GroupsWithoutAdjacentPairsAreExcluded) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = 1;
  cfg.radio_range_sensor = 0.01;
  cfg.radio_range_head = 0.01;
  SchemeParams p;
  p.m = 1;
  p.m_prime = 1;
  p.t = 10;
  auto r = run(cfg, p, 3);
  const auto rep = connectivity_simulate(r.state, r.dep, r.graph);
  EXPECT_EQ(rep.groups_excluded, 9u);
  EXPECT_FALSE(rep.sim_overall.has_value());
}

}  // namespace
}  // namespace hwsnkey
