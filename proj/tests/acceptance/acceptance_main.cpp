// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "hwsnkey/attack.hpp"
#include "hwsnkey/connectivity.hpp"
#include "hwsnkey/error.hpp"
#include "hwsnkey/experiment.hpp"
#include "hwsnkey/polynomial.hpp"
#include "hwsnkey/protocol.hpp"

namespace {

using namespace hwsnkey;
namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 means no time limit
  std::function<Outcome()> check;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

DeploymentConfig nine_groups(std::size_t sensors, std::uint64_t seed) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = sensors;
  cfg.seed = seed;
  return cfg;
}

Outcome unconditional_resilience() {
  const std::size_t sensors = 9 * 200;
  const std::size_t deployments = 10, trials_each = 20;
  std::size_t trials = 0, links = 0;
  for (std::size_t d = 0; d < deployments; ++d) {
    const Deployment dep = deploy(nine_groups(200, 100 + d), 0.1);
    const AdjacencyGraph graph = discover_neighbors(dep);
    Rng rng(100 + d, "acceptance.keys");
    NetworkState state = predistribute(dep, SchemeParams{}, rng, false);
    run_establishment(state, dep, graph, rng);

    AttackSpec spec;
    spec.captured = 1 + d * (sensors / 2 - 1) / (deployments - 1);
    spec.trials = trials_each;
    spec.seed = 500 + d;
    const auto rep = capture_and_measure(state, dep, spec);
    for (std::size_t i = 0; i < rep.per_trial.size(); ++i) {
      if (rep.per_trial[i] != 0.0) {
        return fail(fmt("c=%.0f trial %.0f compromised %.6f", static_cast<double>(spec.captured),
                        static_cast<double>(i), rep.per_trial[i]));
      }
      if (rep.links_considered[i] == 0) return fail("a trial had no surviving links");
      links += rep.links_considered[i];
    }
    trials += rep.per_trial.size();
  }
  if (trials < 200) return fail("fewer than 200 trials");
  return {true, fmt("%.0f trials, c in [1, 900], %.0f surviving links checked, all zero",
                    static_cast<double>(trials), static_cast<double>(links))};
}

Outcome blundo_threshold() {
  const FieldParams field;
  Rng rng(2, "acceptance.blundo");
  const auto poly = gen_symmetric_poly(field, 10, rng);
  std::vector<PolynomialShare> shares;
  for (std::uint64_t id = 2; id < 2 + 11; ++id) shares.push_back(derive_share(poly, NodeId(id)));

  const auto back = lagrange_reconstruct(shares, 10);
  if (!(back == poly)) return fail("11 shares did not reproduce every coefficient");
  shares.pop_back();
  try {
    lagrange_reconstruct(shares, 10);
    return fail("10 shares reconstructed a polynomial");
  } catch (const UnderdeterminedError&) {
  }
  return {true, "11 shares: all 121 coefficients equal; 10 shares: underdetermined"};
}

Outcome hypergeometric_oracle() {
  using BigInt = boost::multiprecision::cpp_int;
  using Exact = boost::rational<BigInt>;
  auto binom = [](unsigned n, unsigned k) {
    BigInt r = 1;
    if (k > n) return BigInt(0);
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  auto widen = [](const Probability& p) {
    return Exact(BigInt(p.numerator()), BigInt(p.denominator()));
  };
  std::size_t cases = 0;
  for (unsigned n = 1; n <= 30; ++n) {
    for (unsigned m = 1; m <= n + 1; ++m) {
      const Exact miss_m(binom(n, m), binom(n + 1, m));
      const Probability p1 = ring_inclusion_probability(n, m);
      if (widen(p1) != Exact(1) - miss_m) return fail(fmt("p1 mismatch n=%.0f m=%.0f", n, m));
      const Probability one(1);
      if (widen(one - (one - p1) * (one - p1)) != Exact(1) - miss_m * miss_m) {
        return fail(fmt("p_sensor_sensor mismatch n=%.0f m=%.0f", n, m));
      }
      for (unsigned mp = m; mp <= n + 1; ++mp) {
        const Exact miss_mp(binom(n, mp), binom(n + 1, mp));
        const Probability p2 = ring_inclusion_probability(n, mp);
        if (widen(p2) != Exact(1) - miss_mp) return fail(fmt("p2 mismatch n=%.0f m'=%.0f", n, mp));
        if (widen(one - (one - p1) * (one - p2)) != Exact(1) - miss_m * miss_mp) {
          return fail(fmt("p_grouphead_sensor mismatch n=%.0f m=%.0f m'=%.0f", n, m, mp));
        }
        ++cases;
      }
    }
  }
  return {true, fmt("%.0f (n_i, m, m') cases equal exactly", static_cast<double>(cases))};
}

Outcome simulation_agreement() {
  ExperimentConfig cfg;
  cfg.name = "agreement";
  cfg.kind = ExperimentKind::Connectivity;
  cfg.scheme.m = 200;
  cfg.sweep = {"n_i", {300, 500, 1000}};
  cfg.series = Sweep{"m_prime", {200, 300}};
  cfg.trials = 20;
  cfg.seed = 4;
  cfg.validate();
  const auto rows = compute_experiment(cfg);

  std::map<std::pair<std::string, double>, double> raw;
  for (const auto& r : rows) {
    if (r.metric == "p_overall_raw") raw[{r.params, r.x}] = r.analytical;
  }
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& r : rows) {
    if (r.metric != "p_overall") continue;
    ++points;
    if (r.trials < 20) return fail("fewer than 20 trials at a sweep point");
    const double d1 = std::abs(r.simulated - r.analytical);
    const double d2 = std::abs(r.simulated - raw.at({r.params, r.x}));
    worst = std::max({worst, d1, d2});
    if (d1 > 0.03 || d2 > 0.03) {
      return fail(fmt("n_i=%.0f: simulated %.4f vs %.4f", r.x, r.simulated, r.analytical) +
                  " (" + r.params + ")");
    }
  }
  if (points != 6) return fail("expected 6 sweep points");
  return {true, fmt("6 points x 20 trials, worst gap %.4f against either overall form", worst)};
}

Outcome saturation() {
  SchemeParams p;
  p.m = 201;
  p.m_prime = 201;
  const Deployment dep = deploy(nine_groups(200, 5));
  const AdjacencyGraph graph = discover_neighbors(dep);
  Rng rng(5, "acceptance.saturation");
  NetworkState state = predistribute(dep, p, rng, false);
  run_establishment(state, dep, graph, rng);
  const auto rep = connectivity_simulate(state, dep, graph);
  if (!rep.sim_sensor_sensor) return fail("no adjacent sensor pairs");
  if (rep.sim_sensor_sensor->mean != 1.0) {
    return fail(fmt("sensor-sensor connectivity %.17g", rep.sim_sensor_sensor->mean));
  }
  return {true, "n_i=200, m=201: sensor-sensor connectivity 1.0 in all 9 groups"};
}

Outcome eg_resilience() {
  const Deployment dep = deploy(nine_groups(200, 6));
  const AdjacencyGraph graph = discover_neighbors(dep);
  BaselineParams p;
  p.scheme = BaselineScheme::EG;
  p.m = 200;
  p.pool_size = 100000;
  Rng rng(6, "acceptance.eg");
  const auto net = baseline_predistribute(p, dep, graph, rng);

  std::string detail;
  double prev = -1.0;
  for (std::size_t c : {50u, 100u, 200u}) {
    AttackSpec spec;
    spec.captured = c;
    spec.trials = 5;
    spec.seed = 6;
    const auto rep = capture_and_measure(net, dep, spec);
    const double oracle = eg_compromise_oracle(200, 100000, c);
    const std::string point = fmt("c=%.0f: %.4f vs %.4f", static_cast<double>(c),
                                  rep.fraction_compromised, oracle);
    if (std::abs(rep.fraction_compromised - oracle) > 0.02) return fail(point);
    if (rep.fraction_compromised < prev) return fail("not monotone at " + point);
    prev = rep.fraction_compromised;
    detail += (detail.empty() ? "" : "; ") + point;
  }
  return {true, detail};
}

Outcome head_capture() {
  const auto cfg = preset_config("fig8");
  const auto rows = compute_experiment(cfg);
  const auto l = cfg.deployment.group_count();
  std::size_t proposed = 0, lekm = 0;
  for (const auto& r : rows) {
    if (r.metric != "sensor_keys_exposed") continue;
    if (r.scheme == "proposed") {
      ++proposed;
      if (r.simulated != 0.0) return fail(fmt("proposed exposed %.3f at c=%.0f", r.simulated, r.x));
    } else if (r.scheme == "lekm") {
      ++lekm;
      if (r.analytical != 100.0 * r.x) return fail(fmt("lekm %.3f at c=%.0f", r.analytical, r.x));
    }
  }
  if (proposed != l + 1 || lekm != l + 1) return fail("missing sweep points for c = 0..l");
  return {true, fmt("c = 0..%.0f: proposed 0 exposed, lekm = 100c", static_cast<double>(l))};
}

Outcome key_agreement() {
  const Deployment dep = deploy(nine_groups(200, 8), 0.2);
  AdjacencyGraph graph = discover_neighbors(dep);
  Rng rng(8, "acceptance.protocol");
  NetworkState state = predistribute(dep, SchemeParams{}, rng, false);
  const auto summary = run_establishment(state, dep, graph, rng);
  if (state.case3_exchanges.size() < 20) return fail("fewer than 20 Case III exchanges");
  std::size_t mismatched = 0;
  state.established.for_each([&](const LinkRecord& rec) { mismatched += !rec.agreed(); });
  if (mismatched) return fail(fmt("%.0f links with differing keys", mismatched));

  // Tamper run on a fresh network with direct establishment done.
  Deployment dep2 = deploy(nine_groups(200, 9), 0.2);
  AdjacencyGraph graph2 = discover_neighbors(dep2);
  Rng rng2(9, "acceptance.tamper");
  NetworkState s2 = predistribute(dep2, SchemeParams{}, rng2, false);
  establish_inter_group(s2, dep2, graph2);
  establish_intra_group(s2, dep2, graph2);
  std::size_t attempts = 0;
  for (const auto& n : dep2.nodes()) {
    if (!n.misdeployed) continue;
    for (NodeId v : graph2.neighbors(n.id)) {
      const auto& nv = dep2.node(v);
      if (nv.kind != NodeKind::RegularSensor || nv.misdeployed || nv.home_group != n.cell) continue;
      if (s2.established.contains(n.id, v)) continue;
      Case3Faults faults;
      (attempts % 2 ? faults.corrupt_request : faults.wrong_master) = true;
      const std::size_t before = s2.established.size();
      if (establish_case3(s2, dep2, graph2, n.id, v, rng2, faults) != Case3Outcome::Rejected) {
        return fail("a tampered request was not rejected");
      }
      if (s2.established.size() != before || s2.established.contains(n.id, v)) {
        return fail("a rejected exchange stored a key");
      }
      ++attempts;
      break;
    }
  }
  if (attempts < 20) return fail("fewer than 20 tamper attempts");
  if (s2.case3_rejections != attempts) return fail("rejection count mismatch");
  return {true, fmt("%.0f links agree (%.0f via Case III); %.0f tampered requests rejected",
                    static_cast<double>(state.established.size()),
                    static_cast<double>(summary.established), static_cast<double>(attempts))};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "hwsnkey_acceptance_determinism";
  fs::remove_all(root);
  std::size_t bytes = 0;
  for (const auto& name : preset_names()) {
    std::string csv[2];
    for (int run = 0; run < 2; ++run) {
      auto cfg = preset_config(name);
      cfg.output_dir = (root / (name + "_" + std::to_string(run))).string();
      csv[run] = slurp(run_experiment(cfg).csv_path);
    }
    if (csv[0].empty() || csv[0] != csv[1]) return fail(name + " CSV differs between runs");
    bytes += csv[0].size();
  }
  fs::remove_all(root);
  return {true, fmt("all 7 presets rerun byte-identical (%.0f CSV bytes)",
                    static_cast<double>(bytes))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "unconditional resilience of the proposed scheme", 60, unconditional_resilience},
      {2, "blundo t-collusion threshold", 1, blundo_threshold},
      {3, "connectivity closed forms equal exact hypergeometric values", 1,
       hypergeometric_oracle},
      {4, "simulated overall connectivity tracks the closed form", 180, simulation_agreement},
      {5, "saturated rings give full sensor-sensor connectivity", 0, saturation},
      {6, "eg resilience matches 1-(1-m/M)^c", 120, eg_resilience},
      {7, "head capture during initialization", 0, head_capture},
      {8, "pairwise key agreement and case III tamper rejection", 0, key_agreement},
      {9, "preset reruns are byte-identical", 0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && c.budget_seconds > 0 && secs > c.budget_seconds) {
      out = fail(fmt("took %.2f s, limit %.0f s", secs, c.budget_seconds));
    }
    failures += !out.ok;
    std::printf("%s  %d  %s  [%.2f s]  %s\n", out.ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                secs, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
