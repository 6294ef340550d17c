#include <doctest.h>

#include "santa/oracle.hpp"
#include "support/test_util.hpp"

using namespace santa;

TEST_CASE("diagonal instance has optimum 1") {
  Instance inst({"r1", "r2"}, {"p", "q"},
                {ValuationOracle::additive({{0, 1.0}}),
                 ValuationOracle::additive({{1, 1.0}})});
  BruteOptResult res = brute_opt(inst);
  CHECK(res.value == doctest::Approx(1.0));
  CHECK(inst.min_value(res.allocation) == doctest::Approx(1.0));
}

TEST_CASE("two players one resource leave someone empty") {
  Instance inst({"r"}, {"p", "q"}, {ValuationOracle::additive({{0, 1.0}}),
                                    ValuationOracle::additive({{0, 1.0}})});
  CHECK(brute_opt(inst).value == doctest::Approx(0.0));
}

TEST_CASE("brute_opt matches an independent recursive enumerator") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst = testutil::random_tiny_instance(rng, 3, 4);
    CHECK(brute_opt(inst).value ==
          doctest::Approx(testutil::recursive_brute_opt(inst)));
  }
}

TEST_CASE("brute_opt rejects oversized instances") {
  std::mt19937_64 rng(2);
  Instance inst = testutil::random_tiny_instance(rng, 10, 10);
  CHECK_THROWS_AS(brute_opt(inst), CapabilityError);
}

namespace {

// source 0 -> 1 -> 2(sink v)
Level single_path_level(double edge_value) {
  std::map<int, double> vals{{0, edge_value}};
  return Level(3, {{0, 1}, {1, 2}}, {0}, {{2, ValuationOracle::additive(vals)}});
}

}  // namespace

TEST_CASE("single path gives exactly one configuration at alpha 1") {
  Level lev = single_path_level(1.0);
  auto configs = enumerate_configurations(lev, 2, 1.0, 1);
  REQUIRE(configs.size() == 1);
  CHECK(configs[0].flow == IntFlow{1, 1});
  CHECK(configs[0].coverage == doctest::Approx(1.0));
}

TEST_CASE("zero-valued sinks admit no configurations") {
  Level lev = single_path_level(0.0);
  CHECK(enumerate_configurations(lev, 2, 2.0, 1).empty());
}

TEST_CASE("diamond counts match the direct recursion") {
  // two sources, two middles, one sink; 6 edges
  std::map<int, double> vals{{0, 0.6}, {1, 0.6}};
  Level lev(5, {{0, 2}, {1, 3}, {2, 4}, {3, 4}, {2, 3}, {3, 2}}, {0, 1},
            {{4, ValuationOracle::additive(vals)}});
  // independent count: enumerate all assignments of {0,..,beta} to 6 edges
  auto count_direct = [&](double alpha, std::int64_t beta) {
    int count = 0;
    std::vector<std::int64_t> g(6, 0);
    std::function<void(int)> rec = [&](int e) {
      if (e == 6) {
        for (int v = 2; v <= 3; ++v) {  // interior conservation
          std::int64_t in = 0, out = 0;
          for (int i = 0; i < 6; ++i) {
            if (lev.edge(i).to == v) in += g[i];
            if (lev.edge(i).from == v) out += g[i];
          }
          if (in != out) return;
        }
        std::vector<int> got;
        for (int i = 0; i < 6; ++i)
          if (g[i] > 0 && lev.edge(i).to == 4) got.push_back(i);
        if (lev.sink_value(0, got) < 1.0 / alpha - 1e-9) return;
        ++count;
        return;
      }
      for (std::int64_t v = 0; v <= beta; ++v) {
        g[e] = v;
        rec(e + 1);
      }
      g[e] = 0;
    };
    rec(0);
    return count;
  };
  for (std::int64_t beta = 1; beta <= 2; ++beta) {
    for (double alpha : {1.0, 2.0}) {
      CHECK(static_cast<int>(enumerate_configurations(lev, 4, alpha, beta).size()) ==
            count_direct(alpha, beta));
    }
  }
}

TEST_CASE("explicit CLP trivial cases") {
  std::mt19937_64 rng(71);
  auto planted = testutil::random_planted_canonical(rng, 1, 1, 3, 1, 2.0);
  Assignment sigma(planted.canonical.num_resources());
  for (int cp = 0; cp < planted.canonical.num_complex(); ++cp)
    sigma.owner[planted.canonical.private_resource[cp]] =
        planted.canonical.num_basic() + cp;
  BuiltAug built = build_aug_instance(planted.canonical, sigma, 1);

  // empty target set: feasible with the zero solution
  RatVec zero(built.instance.suffix_edge_count(0), Rat(0));
  CHECK(explicit_clp_feasible(built.instance, 0, {}, zero, 1.0, 1).feasible);

  // t needs budget but every edge has none
  CHECK_FALSE(explicit_clp_feasible(built.instance, 0, {built.t_vertex}, zero,
                                    1.0, 1)
                  .feasible);

  // with budget 1 everywhere the planted instance is feasible at (1,1)
  RatVec ones(built.instance.suffix_edge_count(0), Rat(1));
  CHECK(explicit_clp_feasible(built.instance, 0, {built.t_vertex}, ones, 1.0, 1)
            .feasible);
}

TEST_CASE("brute_aug finds the planted solution and rejects impossible targets") {
  std::mt19937_64 rng(81);
  auto planted = testutil::random_planted_canonical(rng, 1, 1, 3, 1, 2.0);
  Assignment sigma(planted.canonical.num_resources());
  for (int cp = 0; cp < planted.canonical.num_complex(); ++cp)
    sigma.owner[planted.canonical.private_resource[cp]] =
        planted.canonical.num_basic() + cp;
  BuiltAug built = build_aug_instance(planted.canonical, sigma, 2);
  REQUIRE_FALSE(built.nothing_to_augment());

  auto sol = brute_aug(built.instance, {built.t_vertex});
  REQUIRE(sol.has_value());
  CHECK(check_feasible(built.instance, *sol, {built.t_vertex}, 1.0, 1));

  // empty targets: the zero solution
  auto zero = brute_aug(built.instance, {});
  REQUIRE(zero.has_value());
  for (const IntFlow& g : zero->flows)
    for (std::int64_t f : g) CHECK(f == 0);
}

TEST_CASE("brute_aug reports none when a required sink has no value") {
  std::map<int, double> vals{{0, 0.0}};
  Level lev(3, {{0, 1}, {1, 2}}, {0}, {{2, ValuationOracle::additive(vals)}});
  AugInstance inst({lev}, {});
  CHECK_FALSE(brute_aug(inst, {2}).has_value());
}
