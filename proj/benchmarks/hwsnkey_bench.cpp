#include <benchmark/benchmark.h>

#include <vector>

#include "hwsnkey/deployment.hpp"
#include "hwsnkey/polynomial.hpp"
#include "hwsnkey/prf.hpp"
#include "hwsnkey/protocol.hpp"

namespace {

using namespace hwsnkey;

void BM_Prf(benchmark::State& state) {
  Rng rng(1);
  const MasterKey mk{rng.key128()};
  std::uint64_t id = 2;
  for (auto _ : state) benchmark::DoNotOptimize(prf(mk, NodeId(id++)));
}
BENCHMARK(BM_Prf);

void BM_KeyedPrf(benchmark::State& state) {
  Rng rng(1);
  const KeyedPrf f(MasterKey{rng.key128()});
  std::uint64_t id = 2;
  for (auto _ : state) benchmark::DoNotOptimize(f(NodeId(id++)));
}
BENCHMARK(BM_KeyedPrf);

void BM_ShareEval(benchmark::State& state) {
  Rng rng(2);
  const auto poly = gen_symmetric_poly(FieldParams{}, static_cast<std::size_t>(state.range(0)), rng);
  const auto share = derive_share(poly, NodeId(7));
  std::uint64_t id = 8;
  for (auto _ : state) benchmark::DoNotOptimize(eval_share(share, NodeId(id++)));
}
BENCHMARK(BM_ShareEval)->Arg(10)->Arg(250);

void BM_Reconstruct(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto poly = gen_symmetric_poly(FieldParams{}, t, rng);
  std::vector<PolynomialShare> shares;
  for (std::size_t i = 0; i <= t; ++i) shares.push_back(derive_share(poly, NodeId(2 + i)));
  for (auto _ : state) benchmark::DoNotOptimize(lagrange_reconstruct(shares, t));
}
BENCHMARK(BM_Reconstruct)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

DeploymentConfig nine_groups(std::size_t n) {
  DeploymentConfig cfg;
  cfg.sensors_per_group = n;
  return cfg;
}

void BM_NeighborDiscovery(benchmark::State& state) {
  const Deployment dep = deploy(nine_groups(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(discover_neighbors(dep));
}
BENCHMARK(BM_NeighborDiscovery)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Predistribute(benchmark::State& state) {
  const Deployment dep = deploy(nine_groups(static_cast<std::size_t>(state.range(0))));
  SchemeParams p;
  for (auto _ : state) {
    Rng rng(4);
    benchmark::DoNotOptimize(predistribute(dep, p, rng, false));
  }
}
BENCHMARK(BM_Predistribute)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Establishment(benchmark::State& state) {
  const Deployment dep = deploy(nine_groups(static_cast<std::size_t>(state.range(0))), 0.05);
  const AdjacencyGraph graph = discover_neighbors(dep);
  SchemeParams p;
  for (auto _ : state) {
    state.PauseTiming();
    Rng rng(5);
    NetworkState net = predistribute(dep, p, rng, false);
    state.ResumeTiming();
    run_establishment(net, dep, graph, rng);
    benchmark::DoNotOptimize(net.established.size());
  }
}
BENCHMARK(BM_Establishment)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
