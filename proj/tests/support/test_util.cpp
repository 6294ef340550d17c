#include "support/test_util.hpp"

#include <algorithm>
#include <cmath>

namespace santa::testutil {

namespace {

std::uniform_real_distribution<double> unit(0.0, 1.0);

}  // namespace

ValuationOracle random_additive_oracle(std::mt19937_64& rng, int ground) {
  std::map<int, double> values;
  for (int r = 0; r < ground; ++r) values[r] = unit(rng);
  return ValuationOracle::additive(std::move(values));
}

ValuationOracle random_coverage_oracle(std::mt19937_64& rng, int ground) {
  const int universe = std::max(2, ground);
  std::map<int, double> weights;
  for (int e = 0; e < universe; ++e) weights[e] = unit(rng);
  std::map<int, std::vector<int>> covers;
  for (int r = 0; r < ground; ++r) {
    std::vector<int> sub;
    for (int e = 0; e < universe; ++e)
      if (unit(rng) < 0.4) sub.push_back(e);
    if (sub.empty()) sub.push_back(static_cast<int>(rng() % universe));
    covers[r] = std::move(sub);
  }
  return ValuationOracle::weighted_coverage(std::move(covers), std::move(weights));
}

ValuationOracle random_truncated_oracle(std::mt19937_64& rng, int ground) {
  std::map<int, double> values;
  double total = 0.0;
  for (int r = 0; r < ground; ++r) {
    values[r] = unit(rng);
    total += values[r];
  }
  return ValuationOracle::truncated_additive(std::move(values),
                                             total * (0.3 + 0.5 * unit(rng)));
}

ValuationOracle random_table_oracle(std::mt19937_64& rng, int ground) {
  ValuationOracle base = (rng() % 2 == 0) ? random_coverage_oracle(rng, ground)
                                          : random_truncated_oracle(rng, ground);
  std::vector<int> g(ground);
  for (int r = 0; r < ground; ++r) g[r] = r;
  std::vector<double> table(std::size_t(1) << ground);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    Bundle b;
    for (int r = 0; r < ground; ++r)
      if (mask >> r & 1u) b.push_back(r);
    table[mask] = base.evaluate(b);
  }
  return ValuationOracle::explicit_table(std::move(g), std::move(table));
}

ValuationOracle random_oracle(std::mt19937_64& rng, int kind, int ground) {
  switch (kind % 4) {
    case 0: return random_additive_oracle(rng, ground);
    case 1: return random_coverage_oracle(rng, ground);
    case 2: return random_truncated_oracle(rng, ground);
    default: return random_table_oracle(rng, ground);
  }
}

Instance random_tiny_instance(std::mt19937_64& rng, int players, int resources) {
  std::vector<std::string> rnames, pnames;
  for (int r = 0; r < resources; ++r) rnames.push_back("r" + std::to_string(r));
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    pnames.push_back("p" + std::to_string(p));
    oracles.push_back(random_additive_oracle(rng, resources));
  }
  return Instance(std::move(rnames), std::move(pnames), std::move(oracles));
}

PlantedCanonical random_planted_canonical(std::mt19937_64& rng, int basics,
                                          int complexes, int smalls_per_complex,
                                          int steal_basics, double gamma) {
  steal_basics = std::min(steal_basics, std::min(basics, complexes));

  // Resource layout: per complex, one private then its smalls; then one own
  // cover resource per non-steal basic.
  PlantedCanonical out;
  CanonicalInstance& c = out.canonical;
  c.gamma = gamma;
  std::vector<int> private_of(complexes), own_cover(basics, -1);
  std::vector<std::vector<int>> smalls_of(complexes);
  int next = 0;
  auto add_resource = [&](const std::string& name) {
    c.resource_names.push_back(name);
    return next++;
  };
  for (int cp = 0; cp < complexes; ++cp) {
    private_of[cp] = add_resource("v" + std::to_string(cp));
    for (int s = 0; s < smalls_per_complex; ++s)
      smalls_of[cp].push_back(add_resource("s" + std::to_string(cp) + "_" +
                                           std::to_string(s)));
  }
  for (int b = steal_basics; b < basics; ++b)
    own_cover[b] = add_resource("c" + std::to_string(b));

  // Steal basic b is covered by the private of complex b; that complex must
  // then live off its smalls.
  for (int b = 0; b < basics; ++b) {
    if (b < steal_basics)
      c.basic_covers.push_back({private_of[b]});
    else
      c.basic_covers.push_back({own_cover[b]});
  }
  for (int cp = 0; cp < complexes; ++cp) {
    c.private_resource.push_back(private_of[cp]);
    std::map<int, double> vals;
    const int m = std::max(1, smalls_per_complex);
    for (int r : smalls_of[cp]) vals[r] = 1.0 / m;  // < 1/gamma needs m > gamma
    // Keep singletons strictly below 1/gamma by capping per-resource value.
    for (auto& [r, v] : vals) v = std::min(v, 1.0 / gamma - 1e-3);
    c.complex_small.push_back(
        ValuationOracle::truncated_additive(std::move(vals), 1.0));
  }
  (void)rng;

  // Optimal assignment: steal basics take privates, their complexes take all
  // smalls; everyone else keeps their own resource.
  out.sigma_opt = Assignment(c.num_resources());
  for (int b = 0; b < basics; ++b) {
    if (b < steal_basics)
      out.sigma_opt.owner[private_of[b]] = b;
    else
      out.sigma_opt.owner[own_cover[b]] = b;
  }
  for (int cp = 0; cp < complexes; ++cp) {
    if (cp < steal_basics) {
      for (int r : smalls_of[cp]) out.sigma_opt.owner[r] = basics + cp;
    } else {
      out.sigma_opt.owner[private_of[cp]] = basics + cp;
    }
  }
  c.validate();

  // The planted optimum must have value 1: smalls of a stolen complex must
  // add up to at least 1.
  for (int cp = 0; cp < steal_basics; ++cp) {
    Bundle bundle = smalls_of[cp];
    if (c.complex_value(cp, bundle) < 1.0 - 1e-9)
      throw InputError("planted canonical: smalls too weak; raise smalls_per_complex");
  }
  return out;
}

AugSolution constructive_flow(const BuiltAug& built, const CanonicalInstance& c,
                              const Assignment& sigma_opt) {
  (void)c;
  const Level& lev = built.instance.level(0);
  const Assignment& bar = built.cleaned;
  IntFlow g(lev.num_edges(), 0);
  for (int e = 0; e < lev.num_edges(); ++e) {
    const AugEdgeInfo& info = built.edge_info[e];
    switch (info.kind) {
      case AugEdgeKind::PlayerToResource:
        // The holder releases the resource exactly when the optimum moves it.
        if (sigma_opt.owner[info.resource] != Assignment::kUnassigned &&
            sigma_opt.owner[info.resource] != bar.owner[info.resource])
          g[e] = 1;
        break;
      case AugEdgeKind::ResourceToPlayer:
        if (sigma_opt.owner[info.resource] == info.player) g[e] = 1;
        break;
      case AugEdgeKind::SourceToResource:
        if (sigma_opt.owner[info.resource] != Assignment::kUnassigned &&
            sigma_opt.owner[info.resource] != bar.owner[info.resource])
          g[e] = 1;
        break;
      case AugEdgeKind::PlayerToT:
        g[e] = 1;
        break;
    }
  }
  AugSolution out;
  out.flows.assign(built.instance.num_levels(), g);
  out.congestion = 1;
  return out;
}

double recursive_brute_opt(const Instance& instance) {
  const int P = instance.num_players();
  const int R = instance.num_resources();
  std::vector<int> owner(R, -1);
  double best = -1.0;
  std::function<void(int)> rec = [&](int r) {
    if (r == R) {
      Assignment a(R);
      a.owner = owner;
      best = std::max(best, instance.min_value(a));
      return;
    }
    for (int p = 0; p < P; ++p) {
      owner[r] = p;
      rec(r + 1);
    }
    owner[r] = -1;
  };
  rec(0);
  return std::max(best, 0.0);
}

bool definition_submodular(const ValuationOracle& oracle, double tol) {
  const std::vector<int> ground = oracle.support();
  const int n = static_cast<int>(ground.size());
  auto bundle_of = [&](std::uint32_t mask) {
    Bundle b;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) b.push_back(ground[i]);
    return b;
  };
  std::vector<double> val(std::size_t(1) << n);
  for (std::uint32_t mask = 0; mask < val.size(); ++mask)
    val[mask] = oracle.evaluate(bundle_of(mask));
  if (std::fabs(val[0]) > tol) return false;
  // every A subset B (B = A union extra), r outside B
  for (std::uint32_t b = 0; b < val.size(); ++b) {
    for (std::uint32_t a = b;; a = (a - 1) & b) {  // submask enumeration
      for (int i = 0; i < n; ++i) {
        if (b >> i & 1u) continue;
        const std::uint32_t bit = 1u << i;
        if (val[a | bit] - val[a] < val[b | bit] - val[b] - tol) return false;
        if (val[a | bit] < val[a] - tol) return false;
      }
      if (a == 0) break;
    }
  }
  return true;
}

Level random_layered_level(std::mt19937_64& rng, int sources, int middles,
                           int sinks, double edge_prob, double singleton_cap) {
  const int V = sources + middles + sinks;
  std::vector<LevelEdge> edges;
  std::vector<int> src_list, sink_list;
  auto src = [&](int i) { return i; };
  auto mid = [&](int i) { return sources + i; };
  auto snk = [&](int i) { return sources + middles + i; };

  for (int s = 0; s < sources; ++s) {
    src_list.push_back(src(s));
    // exactly one outgoing edge per source
    if (middles > 0 && (sinks == 0 || unit(rng) < 0.7)) {
      edges.push_back({src(s), mid(static_cast<int>(rng() % middles))});
    } else if (sinks > 0) {
      edges.push_back({src(s), snk(static_cast<int>(rng() % sinks))});
    }
  }
  for (int m = 0; m < middles; ++m)
    for (int t = 0; t < sinks; ++t)
      if (unit(rng) < edge_prob) edges.push_back({mid(m), snk(t)});
  // Forward middle-to-middle edges to get longer paths.
  for (int a = 0; a < middles; ++a)
    for (int b = a + 1; b < middles; ++b)
      if (unit(rng) < edge_prob * 0.4) edges.push_back({mid(a), mid(b)});

  // Sink valuations over local in-edge positions, assigned after edges exist.
  std::vector<std::vector<int>> in_of(V);
  for (std::size_t e = 0; e < edges.size(); ++e)
    in_of[edges[e].to].push_back(static_cast<int>(e));
  std::vector<Sink> sink_objs;
  for (int t = 0; t < sinks; ++t) {
    const int deg = static_cast<int>(in_of[snk(t)].size());
    std::map<int, double> vals;
    for (int i = 0; i < deg; ++i)
      vals[i] = singleton_cap * (0.3 + 0.7 * unit(rng));
    sink_objs.push_back(
        {snk(t), ValuationOracle::truncated_additive(std::move(vals), 1.0)});
  }
  return Level(V, std::move(edges), std::move(src_list), std::move(sink_objs));
}

AugInstance random_tiny_aug(std::mt19937_64& rng, int levels, int sources,
                            int middles, int sinks, double edge_prob) {
  std::vector<Level> lvls;
  for (int i = 0; i < levels; ++i)
    lvls.push_back(
        random_layered_level(rng, sources, middles, sinks, edge_prob, 0.8));
  std::vector<std::vector<LinkingEdge>> links;
  for (int i = 0; i + 1 < levels; ++i) {
    std::vector<LinkingEdge> li;
    const int pairs = std::min(sources, sinks);
    for (int p = 0; p < pairs; ++p) {
      if (unit(rng) < 0.7) {
        // sink p of level i+1 feeds source p of level i
        li.push_back({lvls[i + 1].sinks()[p].vertex, lvls[i].sources()[p]});
      }
    }
    links.push_back(std::move(li));
  }
  return AugInstance(std::move(lvls), std::move(links));
}

}  // namespace santa::testutil
