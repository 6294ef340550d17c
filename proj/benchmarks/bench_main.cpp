#include <benchmark/benchmark.h>

#include <random>

#include "santa/flow.hpp"
#include "santa/multilinear.hpp"
#include "santa/valuation.hpp"

namespace {

using namespace santa;

ValuationOracle coverage_oracle(int ground, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<int, double> weights;
  for (int e = 0; e < ground; ++e) weights[e] = unit(rng);
  std::map<int, std::vector<int>> covers;
  for (int r = 0; r < ground; ++r) {
    std::vector<int> sub;
    for (int e = 0; e < ground; ++e)
      if (unit(rng) < 0.4) sub.push_back(e);
    if (sub.empty()) sub.push_back(0);
    covers[r] = std::move(sub);
  }
  return ValuationOracle::weighted_coverage(std::move(covers), std::move(weights));
}

void BM_OracleEvaluate(benchmark::State& state) {
  const int ground = static_cast<int>(state.range(0));
  ValuationOracle f = coverage_oracle(ground, 7);
  Bundle bundle;
  for (int r = 0; r < ground; r += 2) bundle.push_back(r);
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate(bundle));
}
BENCHMARK(BM_OracleEvaluate)->Arg(8)->Arg(16);

void BM_SubsetTable(benchmark::State& state) {
  const int ground = static_cast<int>(state.range(0));
  ValuationOracle f = coverage_oracle(ground, 11);
  std::vector<int> g(ground);
  for (int r = 0; r < ground; ++r) g[r] = r;
  for (auto _ : state) {
    SubsetTable table(f, g);
    benchmark::DoNotOptimize(table.full_value());
  }
}
BENCHMARK(BM_SubsetTable)->Arg(8)->Arg(12);

void BM_MultilinearEstimate(benchmark::State& state) {
  ValuationOracle f = coverage_oracle(12, 3);
  std::vector<int> g(12);
  for (int r = 0; r < 12; ++r) g[r] = r;
  SubsetTable table(f, g);
  std::vector<double> x(12, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        multilinear_estimate(table, x, static_cast<int>(state.range(0)), 5));
}
BENCHMARK(BM_MultilinearEstimate)->Arg(500)->Arg(2000);

Level chain_level(int n) {
  // source -> v1 -> ... -> v_{n} -> sink plus parallel shortcuts
  std::vector<LevelEdge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  for (int i = 0; i + 2 < n; i += 2) edges.push_back({i, i + 2});
  std::map<int, double> vals{{0, 1.0}, {1, 1.0}};
  std::vector<Sink> sinks{{n - 1, ValuationOracle::truncated_additive(vals, 1.0)}};
  return Level(n, std::move(edges), {0}, std::move(sinks));
}

void BM_MaxFlow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Level lev = chain_level(n);
  IntFlow caps(lev.num_edges(), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(max_flow_integral(lev, {{0, 4}}, n - 1, caps).value);
}
BENCHMARK(BM_MaxFlow)->Arg(16)->Arg(64);

void BM_PathDecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Level lev = chain_level(n);
  IntFlow caps(lev.num_edges(), 2);
  MaxFlowResult mf = max_flow_integral(lev, {{0, 4}}, n - 1, caps);
  for (auto _ : state)
    benchmark::DoNotOptimize(decompose_flow(lev, mf.flow).paths.size());
}
BENCHMARK(BM_PathDecompose)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
