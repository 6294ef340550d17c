#include <doctest.h>

#include <random>

#include "santa/flow.hpp"
#include "support/test_util.hpp"

using namespace santa;

namespace {

// source 0 -> 1 -> 2(sink)
Level chain3() {
  std::map<int, double> vals{{0, 1.0}};
  return Level(3, {{0, 1}, {1, 2}}, {0},
               {{2, ValuationOracle::additive(vals)}});
}

Level diamond() {
  // 0(src) -> 1 -> 3(sink), 0 -> 2 -> 3 is impossible (one out-edge per
  // source), so use two sources.
  std::map<int, double> vals{{0, 1.0}, {1, 1.0}};
  return Level(5, {{0, 2}, {1, 3}, {2, 4}, {3, 4}}, {0, 1},
               {{4, ValuationOracle::additive(vals)}});
}

// Random conserving integer flow on a random layered DAG, built by summing
// unit paths (so conservation holds by construction).
struct RandomFlowCase {
  Level level;
  IntFlow flow;
};
RandomFlowCase random_flow_case(std::mt19937_64& rng) {
  Level lev = santa::testutil::random_layered_level(rng, 3, 4, 2, 0.6, 0.9);
  IntFlow flow(lev.num_edges(), 0);
  for (int trial = 0; trial < 6; ++trial) {
    // random walk from a random source
    const int s = lev.sources()[rng() % lev.sources().size()];
    auto e = lev.source_out_edge(s);
    if (!e) continue;
    std::vector<int> walk;
    int cur = *e;
    while (true) {
      walk.push_back(cur);
      const int v = lev.edge(cur).to;
      if (lev.is_sink(v)) break;
      const auto& outs = lev.out_edges(v);
      if (outs.empty()) {
        walk.clear();
        break;
      }
      cur = outs[rng() % outs.size()];
      if (walk.size() > 20) {
        walk.clear();
        break;
      }
    }
    for (int used : walk) flow[used] += 1;
  }
  return {std::move(lev), std::move(flow)};
}

}  // namespace

TEST_CASE("unit path decomposes to a single path") {
  Level lev = chain3();
  PathDecomposition dec = decompose_flow(lev, IntFlow{1, 1});
  REQUIRE(dec.paths.size() == 1);
  CHECK(dec.paths[0].edges == std::vector<int>{0, 1});
  CHECK(dec.paths[0].weight == Rat(1));
}

TEST_CASE("zero flow decomposes to nothing") {
  Level lev = chain3();
  CHECK(decompose_flow(lev, IntFlow{0, 0}).paths.empty());
}

TEST_CASE("non-conserving flow is rejected") {
  Level lev = chain3();
  CHECK_THROWS_AS(decompose_flow(lev, IntFlow{1, 0}), InputError);
}

TEST_CASE("random conserving flows recompose exactly") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    RandomFlowCase c = random_flow_case(rng);
    REQUIRE(conserves(c.level, to_rational(c.flow)));
    PathDecomposition dec = decompose_flow(c.level, c.flow);
    RatFlow back = recompose(dec, c.level.num_edges());
    for (int e = 0; e < c.level.num_edges(); ++e)
      CHECK(back[e] == Rat(c.flow[e]));
    CHECK(static_cast<int>(dec.paths.size()) <= c.level.num_edges());
  }
}

TEST_CASE("rational flows decompose exactly") {
  Level lev = diamond();
  RatFlow f{Rat(1, 3), Rat(2, 5), Rat(1, 3), Rat(2, 5)};
  PathDecomposition dec = decompose_flow(lev, f);
  RatFlow back = recompose(dec, lev.num_edges());
  for (int e = 0; e < lev.num_edges(); ++e) CHECK(back[e] == f[e]);
}

TEST_CASE("cycles are canceled before decomposition") {
  // 0(src) -> 1, 1 <-> 2 cycle, 1 -> 3(sink)
  std::map<int, double> vals{{0, 1.0}};
  Level lev(4, {{0, 1}, {1, 2}, {2, 1}, {1, 3}}, {0},
            {{3, ValuationOracle::additive(vals)}});
  RatFlow f{Rat(1), Rat(2), Rat(2), Rat(1)};  // conserving, one 2-cycle
  PathDecomposition dec = decompose_flow(lev, f);
  RatFlow back = recompose(dec, lev.num_edges());
  CHECK(back[0] == Rat(1));
  CHECK(back[1] == Rat(0));  // the circulation is gone
  CHECK(back[2] == Rat(0));
  CHECK(back[3] == Rat(1));
}

TEST_CASE("unit_paths splits integral weights") {
  Level lev = chain3();
  PathDecomposition dec = decompose_flow(lev, IntFlow{3, 3});
  auto units = unit_paths(dec);
  CHECK(units.size() == 3);
  for (const auto& p : units) CHECK(p.weight == Rat(1));
}

TEST_CASE("max flow: two disjoint unit paths have value 2") {
  Level lev = diamond();
  MaxFlowResult res =
      max_flow_integral(lev, {{0, 1}, {1, 1}}, 4, IntFlow{1, 1, 1, 1});
  CHECK(res.value == 2);
}

TEST_CASE("max flow: shared bottleneck capacity 1 keeps value 1") {
  // 3 sources feed a middle vertex, one edge middle -> sink cap 1
  std::map<int, double> vals{{0, 1.0}};
  Level lev(5, {{0, 3}, {1, 3}, {2, 3}, {3, 4}}, {0, 1, 2},
            {{4, ValuationOracle::additive(vals)}});
  MaxFlowResult res = max_flow_integral(lev, {{0, 1}, {1, 1}, {2, 1}}, 4,
                                        IntFlow{1, 1, 1, 1});
  CHECK(res.value == 1);
}

TEST_CASE("max flow matches the brute edge-disjoint-path count on unit DAGs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Level lev = santa::testutil::random_layered_level(rng, 3, 3, 1, 0.7, 0.9);
    const int sink = lev.sinks()[0].vertex;
    std::vector<std::pair<int, std::int64_t>> scaps;
    for (int s : lev.sources()) scaps.push_back({s, 1});
    IntFlow caps(lev.num_edges(), 1);
    MaxFlowResult res = max_flow_integral(lev, scaps, sink, caps);

    // independent oracle: enumerate all simple paths, search over subsets for
    // the largest edge-disjoint family
    std::vector<std::vector<int>> paths;
    std::function<void(int, std::vector<int>&)> walk = [&](int v,
                                                           std::vector<int>& acc) {
      if (v == sink) {
        paths.push_back(acc);
        return;
      }
      for (int e : lev.out_edges(v)) {
        acc.push_back(e);
        walk(lev.edge(e).to, acc);
        acc.pop_back();
      }
    };
    for (int s : lev.sources()) {
      std::vector<int> acc;
      walk(s, acc);
    }
    int best = 0;
    REQUIRE(paths.size() <= 18);
    for (std::uint32_t mask = 0; mask < (1u << paths.size()); ++mask) {
      std::vector<char> used_edge(lev.num_edges(), 0);
      std::vector<char> used_source(lev.num_vertices(), 0);
      bool ok = true;
      int count = 0;
      for (std::size_t i = 0; i < paths.size() && ok; ++i) {
        if (!(mask >> i & 1u)) continue;
        ++count;
        const int src = lev.edge(paths[i].front()).from;
        if (used_source[src]) ok = false;
        used_source[src] = 1;
        for (int e : paths[i]) {
          if (used_edge[e]) ok = false;
          used_edge[e] = 1;
        }
      }
      if (ok) best = std::max(best, count);
    }
    CHECK(res.value == best);
  }
}

TEST_CASE("max flow value is monotone in capacities") {
  Level lev = diamond();
  const std::vector<std::pair<int, std::int64_t>> scaps{{0, 2}, {1, 2}};
  IntFlow small{1, 1, 1, 1}, big{2, 2, 2, 2};
  CHECK(max_flow_integral(lev, scaps, 4, small).value <=
        max_flow_integral(lev, scaps, 4, big).value);
}

TEST_CASE("quantize: single bucket of mass 1.5 lands in {1,2}") {
  // two sources each feeding the sink through a middle vertex
  std::map<int, double> vals{{0, 1.0}, {1, 1.0}};
  Level lev(5, {{0, 2}, {1, 3}, {2, 4}, {3, 4}}, {0, 1},
            {{4, ValuationOracle::additive(vals)}});
  // conserving fractional flow: 0.75 on each branch
  RatFlow f{Rat(3, 4), Rat(3, 4), Rat(3, 4), Rat(3, 4)};
  FlowBucket bucket;
  bucket.edges = {2, 3};  // mass 1.5, shared head: the sink
  QuantizeResult q = quantize_flow(lev, f, {bucket}, 4);
  REQUIRE(q.ok);
  const std::int64_t mass = q.flow[2] + q.flow[3];
  CHECK(mass >= 1);
  CHECK(mass <= 2);
  CHECK(q.sink_inflow >= 2);  // ceil(1.5)
}

TEST_CASE("quantize returns integral inputs unchanged") {
  Level lev = chain3();
  RatFlow f{Rat(1), Rat(1)};
  QuantizeResult q = quantize_flow(lev, f, {}, 2);
  REQUIRE(q.ok);
  CHECK(q.flow == IntFlow{1, 1});
}

TEST_CASE("quantize congestion stays within 1") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    RandomFlowCase c = random_flow_case(rng);
    // halve the flow to make it fractional with congestion <= 1
    RatFlow f(c.level.num_edges());
    std::int64_t cong = 1;
    for (int e = 0; e < c.level.num_edges(); ++e)
      cong = std::max(cong, c.flow[e]);
    for (int e = 0; e < c.level.num_edges(); ++e)
      f[e] = Rat(c.flow[e], 2 * cong);
    const int sink = c.level.sinks()[0].vertex;
    QuantizeResult q = quantize_flow(c.level, f, {}, sink);
    REQUIRE(q.ok);
    for (std::int64_t v : q.flow) {
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
    Rat frac_in(0);
    for (int e : c.level.in_edges(sink)) frac_in += f[e];
    CHECK(Rat(q.sink_inflow) >= frac_in);
  }
}

TEST_CASE("quantize bucket constraints verified against exhaustive enumeration") {
  std::mt19937_64 rng(59);
  int interesting = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Level lev = santa::testutil::random_layered_level(rng, 2, 3, 1, 0.8, 0.9);
    if (lev.num_edges() > 12) continue;
    const int sink = lev.sinks()[0].vertex;
    if (lev.in_edges(sink).size() < 2) continue;

    // fractional flow from averaging two random binary conserving flows
    std::vector<IntFlow> bins;
    for (std::uint32_t mask = 0; mask < (1u << lev.num_edges()); ++mask) {
      IntFlow g(lev.num_edges(), 0);
      for (int e = 0; e < lev.num_edges(); ++e) g[e] = (mask >> e) & 1;
      if (conserves(lev, to_rational(g))) bins.push_back(g);
    }
    REQUIRE(bins.size() >= 2);
    const IntFlow& a = bins[rng() % bins.size()];
    const IntFlow& b = bins[rng() % bins.size()];
    RatFlow f(lev.num_edges());
    for (int e = 0; e < lev.num_edges(); ++e) f[e] = Rat(a[e] + b[e], 2);

    // two buckets over the sink in-edges
    const auto& din = lev.in_edges(sink);
    FlowBucket b1, b2;
    for (std::size_t i = 0; i < din.size(); ++i)
      (i % 2 == 0 ? b1 : b2).edges.push_back(din[i]);
    std::vector<FlowBucket> buckets;
    if (!b1.edges.empty()) buckets.push_back(b1);
    if (!b2.edges.empty()) buckets.push_back(b2);

    QuantizeResult q = quantize_flow(lev, f, buckets, sink);

    // oracle: enumerate all 0/1 conserving flows and check the bucket system
    auto mass = [&](const IntFlow& g, const FlowBucket& bu) {
      std::int64_t m = 0;
      for (int e : bu.edges) m += g[e];
      return m;
    };
    bool oracle_feasible = false;
    std::int64_t oracle_best = -1;
    for (const IntFlow& g : bins) {
      bool ok = true;
      for (const FlowBucket& bu : buckets) {
        Rat fm(0);
        for (int e : bu.edges) fm += f[e];
        const std::int64_t lo = rat_floor(fm).convert_to<std::int64_t>();
        const std::int64_t hi = rat_ceil(fm).convert_to<std::int64_t>();
        if (mass(g, bu) < lo || mass(g, bu) > hi) ok = false;
      }
      if (!ok) continue;
      oracle_feasible = true;
      std::int64_t inflow = 0;
      for (int e : lev.in_edges(sink)) inflow += g[e];
      oracle_best = std::max(oracle_best, inflow);
    }
    CHECK(q.ok == oracle_feasible);
    if (q.ok) {
      CHECK(q.sink_inflow == oracle_best);  // both maximize the t-inflow
      for (const FlowBucket& bu : buckets) {
        Rat fm(0);
        for (int e : bu.edges) fm += f[e];
        CHECK(Rat(mass(q.flow, bu)) >= Rat(rat_floor(fm)));
        CHECK(Rat(mass(q.flow, bu)) <= Rat(rat_ceil(fm)));
      }
      ++interesting;
    }
  }
  CHECK(interesting >= 10);
}
