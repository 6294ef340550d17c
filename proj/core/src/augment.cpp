#include "santa/augment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace santa {

namespace {

constexpr double kTol = 1e-9;

struct UPath {
  int level = 0;
  std::vector<int> edges;
  int source = -1;
  int sink = -1;
  bool alive = true;
};

struct PathSystem {
  const BuiltAug* built = nullptr;
  std::vector<UPath> paths;
  std::vector<std::vector<int>> by_level;  // path ids per level

  const Level& level(int i) const { return built->instance.level(i); }

  // Complex player index of a C^S source vertex, or -1.
  int complex_of_source(int v) const {
    const AugVertexInfo& info = built->vertex_info[v];
    return info.kind == AugVertexKind::ComplexSource ? info.index : -1;
  }
  bool is_fresh_source(int v) const {
    return built->vertex_info[v].kind == AugVertexKind::SourceS;
  }

  std::vector<int> alive_paths_into(int lvl, int sink_vertex) const {
    std::vector<int> out;
    for (int id : by_level[lvl])
      if (paths[id].alive && paths[id].sink == sink_vertex) out.push_back(id);
    return out;
  }

  bool source_used(int lvl, int source_vertex) const {
    for (int id : by_level[lvl])
      if (paths[id].alive && paths[id].source == source_vertex) return true;
    return false;
  }

  // Kills a path and cascades into the subtree it was holding up.
  void kill(int id) {
    if (!paths[id].alive) return;
    paths[id].alive = false;
    const int lvl = paths[id].level;
    const int cq = complex_of_source(paths[id].source);
    if (cq < 0 || lvl + 1 >= built->instance.num_levels()) return;
    if (source_used(lvl, paths[id].source)) return;
    const int twin = built->complex_target_vertex[cq];
    for (int other : by_level[lvl + 1])
      if (paths[other].alive && paths[other].sink == twin) kill(other);
  }

  // Marginal weights of the alive paths into a sink, in the deterministic
  // (source, edge ids) order. Returns (path id, weight).
  std::vector<std::pair<int, double>> weights_into(int lvl, int sink_vertex) const {
    std::vector<int> ids = alive_paths_into(lvl, sink_vertex);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      if (paths[a].source != paths[b].source) return paths[a].source < paths[b].source;
      return paths[a].edges < paths[b].edges;
    });
    const Level& lev = level(lvl);
    const int pos = lev.sink_position(sink_vertex);
    std::vector<std::pair<int, double>> out;
    std::vector<int> acc;
    double prev = 0.0;
    for (int id : ids) {
      acc.push_back(paths[id].edges.back());
      const double now = lev.sink_value(pos, acc);
      out.push_back({id, now - prev});
      prev = now;
    }
    return out;
  }

  IntFlow flow_of_level(int lvl) const {
    IntFlow g(level(lvl).num_edges(), 0);
    for (int id : by_level[lvl])
      if (paths[id].alive)
        for (int e : paths[id].edges) g[e] += 1;
    return g;
  }

  double coverage(int lvl, int sink_vertex) const {
    const Level& lev = level(lvl);
    std::vector<int> last;
    for (int id : alive_paths_into(lvl, sink_vertex))
      last.push_back(paths[id].edges.back());
    return lev.sink_value(lev.sink_position(sink_vertex), last);
  }

  // Restrict every level to the closure of paths actually obliged from t.
  void prune_to_subtree_of_t() {
    std::set<int> needed{built->t_vertex};
    for (int lvl = 0; lvl < built->instance.num_levels(); ++lvl) {
      std::set<int> used_complex_sources;
      for (int id : by_level[lvl]) {
        UPath& p = paths[id];
        if (!p.alive) continue;
        if (!needed.count(p.sink)) {
          p.alive = false;
          continue;
        }
        const int cq = complex_of_source(p.source);
        if (cq >= 0) used_complex_sources.insert(cq);
      }
      needed.clear();
      for (int cq : used_complex_sources)
        needed.insert(built->complex_target_vertex[cq]);
      if (needed.empty()) {
        for (int later = lvl + 1; later < built->instance.num_levels(); ++later)
          for (int id : by_level[later]) paths[id].alive = false;
        break;
      }
    }
  }
};

PathSystem build_paths(const BuiltAug& built, const AugSolution& solution) {
  PathSystem sys;
  sys.built = &built;
  sys.by_level.resize(built.instance.num_levels());
  for (int lvl = 0; lvl < built.instance.num_levels(); ++lvl) {
    PathDecomposition dec =
        decompose_flow(built.instance.level(lvl), solution.flows[lvl]);
    for (const FlowPath& p : unit_paths(dec)) {
      UPath up;
      up.level = lvl;
      up.edges = p.edges;
      up.source = built.instance.level(lvl).edge(p.edges.front()).from;
      up.sink = built.instance.level(lvl).edge(p.edges.back()).to;
      sys.by_level[lvl].push_back(static_cast<int>(sys.paths.size()));
      sys.paths.push_back(std::move(up));
    }
  }
  return sys;
}

AugSolution flows_from(const PathSystem& sys) {
  AugSolution out;
  std::int64_t congestion = 1;
  for (int lvl = 0; lvl < sys.built->instance.num_levels(); ++lvl) {
    out.flows.push_back(sys.flow_of_level(lvl));
    for (std::int64_t f : out.flows.back()) congestion = std::max(congestion, f);
  }
  out.congestion = congestion;
  return out;
}

}  // namespace

StructuredFlow structure_flow(const BuiltAug& built, const AugSolution& solution,
                              double alpha, std::int64_t beta, double gamma,
                              bool enforce_h_bound) {
  const AugInstance& inst = built.instance;
  const int h = inst.num_levels();
  const int n = inst.total_vertices();
  if (enforce_h_bound) {
    if (gamma <= 2.0 * alpha)
      throw InputError("structure_flow: gamma must exceed 2*alpha");
    const double need =
        1.0 + std::log2(static_cast<double>(beta) * n * n) /
                  std::log2(gamma / (2.0 * alpha));
    if (h < need - 1e-9)
      throw InputError("structure_flow: h below 1 + log(beta n^2)/log(gamma/2alpha)");
  }

  PathSystem sys = build_paths(built, solution);
  const int t = built.t_vertex;

  // Split the weight at t between fresh s(r) sources and private releases.
  double fresh_weight = 0.0, release_weight = 0.0;
  for (const auto& [id, w] : sys.weights_into(0, t)) {
    if (sys.is_fresh_source(sys.paths[id].source))
      fresh_weight += w;
    else
      release_weight += w;
  }

  StructuredFlow out;
  if (fresh_weight >= release_weight) {
    // Case (a): keep only the fresh paths into t, clear everything else.
    out.fresh_sources_case = true;
    for (UPath& p : sys.paths) {
      p.alive = p.level == 0 && p.sink == t && sys.is_fresh_source(p.source);
    }
    out.solution = flows_from(sys);
    out.t_coverage = sys.coverage(0, t);
    return out;
  }

  // Case (b): keep only private-release paths into t, then prune the deeper
  // levels with the depth marking.
  out.fresh_sources_case = false;
  for (int id : sys.by_level[0]) {
    UPath& p = sys.paths[id];
    p.alive = p.sink == t && sys.complex_of_source(p.source) >= 0;
  }
  sys.prune_to_subtree_of_t();

  // marked[lvl][complex] = depth of the C^T copy, 0 while unmarked. A C^S copy
  // at level lvl has the depth of its C^T twin at lvl+1.
  std::vector<std::vector<int>> marked(h, std::vector<int>(built.complex_target_vertex.size(), 0));
  auto source_depth = [&](int lvl, int source_vertex) {
    const int cq = sys.complex_of_source(source_vertex);
    if (cq < 0 || lvl + 1 >= h) return -1;
    return marked[lvl + 1][cq] > 0 ? marked[lvl + 1][cq] : -1;
  };

  for (int round = 1; round <= h; ++round) {
    bool changed = false;
    for (int lvl = 1; lvl < h; ++lvl) {
      for (std::size_t cq = 0; cq < built.complex_target_vertex.size(); ++cq) {
        if (marked[lvl][cq] > 0) continue;
        const int v = built.complex_target_vertex[cq];
        const auto weighted = sys.weights_into(lvl, v);
        if (weighted.empty()) continue;
        double total = 0.0, justified = 0.0;
        std::set<int> keep;
        for (const auto& [id, w] : weighted) {
          total += w;
          const int src = sys.paths[id].source;
          const bool ok = round == 1 ? sys.is_fresh_source(src)
                                     : source_depth(lvl, src) == round - 1;
          if (ok) {
            justified += w;
            keep.insert(id);
          }
        }
        if (total <= kTol || justified <= total / (2.0 * h) + kTol) continue;
        marked[lvl][cq] = round;
        changed = true;
        for (const auto& [id, w] : weighted)
          if (!keep.count(id)) sys.kill(id);
      }
    }
    if (!changed && round > 1) break;
  }

  // Enforce grounding: paths released from an unmarked twin cannot be repaid.
  for (int lvl = 0; lvl < h; ++lvl) {
    for (int id : sys.by_level[lvl]) {
      UPath& p = sys.paths[id];
      if (!p.alive) continue;
      const int cq = sys.complex_of_source(p.source);
      if (cq < 0) continue;
      if (lvl + 1 >= h || marked[lvl + 1][cq] == 0) sys.kill(id);
    }
  }
  sys.prune_to_subtree_of_t();

  out.solution = flows_from(sys);
  out.t_coverage = sys.coverage(0, t);
  return out;
}

FeasibilityReport check_structured(const BuiltAug& built, const StructuredFlow& s,
                                   double alpha, std::int64_t beta) {
  const AugInstance& inst = built.instance;
  const int h = inst.num_levels();
  auto violation = [](std::string reason, int lvl, int loc) {
    FeasibilityReport r;
    r.ok = false;
    r.reason = std::move(reason);
    r.level = lvl;
    r.location = loc;
    return r;
  };

  for (int lvl = 0; lvl < h; ++lvl) {
    const Level& lev = inst.level(lvl);
    const IntFlow& g = s.solution.flows[lvl];
    for (int e = 0; e < lev.num_edges(); ++e) {
      if (g[e] < 0 || g[e] > beta) return violation("congestion outside [0,beta]", lvl, e);
    }
    for (int v = 0; v < lev.num_vertices(); ++v) {
      if (lev.is_source(v) || lev.is_sink(v)) continue;
      std::int64_t bal = 0;
      for (int e : lev.in_edges(v)) bal += g[e];
      for (int e : lev.out_edges(v)) bal -= g[e];
      if (bal != 0) return violation("conservation violated", lvl, v);
    }
  }

  const Level& l0 = inst.level(0);
  for (int v : used_sources(l0, s.solution.flows[0])) {
    const bool fresh = built.vertex_info[v].kind == AugVertexKind::SourceS;
    if (s.fresh_sources_case && !fresh)
      return violation("case (a) flow uses a private-release source", 0, v);
    if (!s.fresh_sources_case && fresh)
      return violation("case (b) flow uses a fresh source", 0, v);
  }
  // Property (2): the last level never releases privates.
  const Level& lh = inst.level(h - 1);
  for (int v : used_sources(lh, s.solution.flows[h - 1]))
    if (built.vertex_info[v].kind == AugVertexKind::ComplexSource)
      return violation("last level uses a private-release source", h - 1, v);

  const double need = 1.0 / (2.0 * h * alpha) - kTol;
  if (!l0.in_edges(built.t_vertex).empty() && s.t_coverage < need)
    return violation("t coverage below 1/(2 h alpha)", 0, built.t_vertex);

  // Every obliged complex sink must be covered at the structured level.
  for (int lvl = 0; lvl + 1 < h; ++lvl) {
    const std::vector<int> used = used_sources(inst.level(lvl), s.solution.flows[lvl]);
    for (int u : inst.linked_sinks(lvl, used)) {
      const Level& up = inst.level(lvl + 1);
      if (up.in_edges(u).empty()) continue;
      const double cov = up.sink_value(up.sink_position(u),
                                       covered_edges(up, u, s.solution.flows[lvl + 1]));
      if (cov < need) return violation("obliged sink below 1/(2 h alpha)", lvl + 1, u);
    }
  }
  return {};
}

namespace {

// Applies a 0/1 reassignment flow on the common level graph to sigma_bar.
Assignment apply_flow(const BuiltAug& built, const Assignment& base,
                      const IntFlow& flow) {
  Assignment out = base;
  const Level& lev = built.instance.level(0);
  for (int e = 0; e < lev.num_edges(); ++e) {
    if (flow[e] <= 0) continue;
    const AugEdgeInfo& info = built.edge_info[e];
    if (info.kind == AugEdgeKind::ResourceToPlayer) out.owner[info.resource] = info.player;
  }
  return out;
}

}  // namespace

Assignment augment_once(const CanonicalInstance& canonical, const Assignment& sigma_k,
                        const BuiltAug& built, const AugSolution& solution,
                        double alpha, std::int64_t beta, double gamma, int k,
                        bool enforce_h_bound, AugmentStats* stats) {
  const AugInstance& inst = built.instance;
  const int h = inst.num_levels();
  if (k < 1) throw InputError("augment_once: k must be >= 1");

  // Contract check before any mutation.
  if (auto rep = check_feasible(inst, solution, {built.t_vertex},
                                alpha, beta);
      !rep)
    throw ContractError("augment_once: input solution infeasible: " + rep.reason);

  AugmentStats local;
  local.uncovered_before = static_cast<int>(built.uncovered_basics.size());
  if (built.uncovered_basics.empty()) {
    if (stats) *stats = local;
    return sigma_k;
  }

  StructuredFlow structured =
      structure_flow(built, solution, alpha, beta, gamma, enforce_h_bound);
  if (auto rep = check_structured(built, structured, alpha, beta); !rep)
    throw ContractError("augment_once: structured flow check failed: " + rep.reason);
  local.fresh_sources_case = structured.fresh_sources_case;
  local.congestion = structured.solution.congestion;

  const Level& lev = inst.level(0);
  const Assignment& bar = built.cleaned;
  Assignment next = bar;

  if (structured.fresh_sources_case) {
    // Integral rerouting of the fresh-source flow at congestion 1.
    const IntFlow& g1 = structured.solution.flows[0];
    IntFlow caps(lev.num_edges(), 0);
    std::int64_t g1_congestion = 1, t_inflow = 0;
    for (int e = 0; e < lev.num_edges(); ++e) {
      caps[e] = g1[e] > 0 ? 1 : 0;
      g1_congestion = std::max(g1_congestion, g1[e]);
    }
    for (int e : lev.in_edges(built.t_vertex)) t_inflow += g1[e];
    std::vector<std::pair<int, std::int64_t>> source_caps;
    for (int v : lev.sources())
      if (built.vertex_info[v].kind == AugVertexKind::SourceS)
        source_caps.push_back({v, 1});
    MaxFlowResult mf = max_flow_integral(lev, source_caps, built.t_vertex, caps);
    const std::int64_t target =
        (t_inflow + g1_congestion - 1) / g1_congestion;  // ceil(value/beta)
    if (mf.value < target)
      throw ContractError("augment_once: integral rerouting below the flow bound");
    next = apply_flow(built, bar, mf.flow);

    // Repair the complex players whose small resources were taken.
    for (int cp = 0; cp < canonical.num_complex(); ++cp) {
      const int player = canonical.num_basic() + cp;
      const int priv = canonical.private_resource[cp];
      if (sigma_k.owner[priv] == player) continue;  // kept its private
      std::vector<int> small_bundle;
      for (int r = 0; r < sigma_k.size(); ++r)
        if (sigma_k.owner[r] == player && r != priv) small_bundle.push_back(r);
      if (small_bundle.empty()) continue;
      std::vector<int> taken, free_list;
      for (int r : small_bundle) {
        if (next.owner[r] != Assignment::kUnassigned && next.owner[r] != player)
          taken.push_back(r);
        else
          free_list.push_back(r);
      }
      if (taken.size() >= 2) {
        // Take the private back; a basic player holding it loses coverage.
        next.owner[priv] = player;
      } else {
        for (int r : free_list) next.owner[r] = player;
      }
    }
  } else {
    // Case (b): quantize the combined released flow against the dyadic
    // marginal buckets, then reassign along the 0/1 flow.
    IntFlow combined(lev.num_edges(), 0);
    for (int lvl = 0; lvl < h; ++lvl)
      for (int e = 0; e < lev.num_edges(); ++e)
        combined[e] += structured.solution.flows[lvl][e];

    std::vector<char> in_x(canonical.num_complex(), 0);
    for (int cp = 0; cp < canonical.num_complex(); ++cp) {
      const int src = built.complex_source_vertex[cp];
      auto oe = lev.source_out_edge(src);
      if (oe && combined[*oe] > 0) in_x[cp] = 1;
    }
    std::vector<char> in_y(canonical.num_complex(), 0);
    for (int cp = 0; cp < canonical.num_complex(); ++cp) {
      const int player = canonical.num_basic() + cp;
      if (!in_x[cp] && sigma_k.owner[canonical.private_resource[cp]] != player)
        in_y[cp] = 1;
    }

    // Dyadic buckets per player over its edge set, ordered by edge id.
    std::vector<FlowBucket> buckets;
    auto bucket_index = [](double marginal) {
      if (marginal <= 0) return -1;
      int i = 0;
      while (std::pow(2.0, -i) > marginal + 1e-12) ++i;
      return i;
    };
    for (int cp = 0; cp < canonical.num_complex(); ++cp) {
      if (!in_x[cp] && !in_y[cp]) continue;
      const int player = canonical.num_basic() + cp;
      std::vector<int> edge_set;
      if (in_x[cp]) {
        for (int e : lev.in_edges(built.complex_target_vertex[cp]))
          if (combined[e] > 0) edge_set.push_back(e);
      } else {
        for (int r = 0; r < sigma_k.size(); ++r) {
          if (sigma_k.owner[r] != player || r == canonical.private_resource[cp])
            continue;
          const int sv = built.unassigned_source_vertex[r];
          if (sv >= 0)
            if (auto oe = lev.source_out_edge(sv)) edge_set.push_back(*oe);
        }
      }
      std::sort(edge_set.begin(), edge_set.end());
      std::map<int, FlowBucket> dyadic;
      Bundle acc;
      double prev = 0.0;
      for (int e : edge_set) {
        const int r = built.edge_info[e].resource;
        acc = make_bundle([&] {
          std::vector<int> tmp = acc;
          tmp.push_back(r);
          return tmp;
        }());
        const double now = std::min(1.0, canonical.complex_value(cp, acc));
        const int idx = bucket_index(now - prev);
        prev = now;
        if (idx >= 0) dyadic[idx].edges.push_back(e);
      }
      for (auto& [idx, bucket] : dyadic) buckets.push_back(std::move(bucket));
    }

    RatFlow phi(lev.num_edges(), Rat(0));
    const Rat half_beta = Rat(1, 2 * structured.solution.congestion);
    const Rat den = Rat(1, 2 * (k + 1) * structured.solution.congestion * h);
    for (int e = 0; e < lev.num_edges(); ++e)
      phi[e] = half_beta * Rat(structured.solution.flows[0][e]) +
               den * Rat(combined[e]);

    QuantizeResult q = quantize_flow(lev, phi, buckets, built.t_vertex);
    if (!q.ok)
      throw ContractError("augment_once: bucket system infeasible at bucket " +
                          std::to_string(q.infeasible_bucket));
    next = apply_flow(built, bar, q.flow);

    // Players that had released their smalls get back whatever the flow did
    // not touch.
    for (int cp = 0; cp < canonical.num_complex(); ++cp) {
      if (!in_y[cp]) continue;
      const int player = canonical.num_basic() + cp;
      for (int r = 0; r < sigma_k.size(); ++r) {
        if (sigma_k.owner[r] != player || r == canonical.private_resource[cp])
          continue;
        const int sv = built.unassigned_source_vertex[r];
        bool traversed = false;
        if (sv >= 0)
          if (auto oe = lev.source_out_edge(sv)) traversed = q.flow[*oe] > 0;
        if (!traversed && next.owner[r] == Assignment::kUnassigned)
          next.owner[r] = player;
      }
    }
  }

  // Bookkeeping for the lemma's guarantees.
  int uncovered_after = 0;
  for (int b = 0; b < canonical.num_basic(); ++b) {
    bool covered = false;
    for (int r : canonical.basic_covers[b])
      if (next.owner[r] == b) covered = true;
    if (!covered) ++uncovered_after;
  }
  local.uncovered_after = uncovered_after;
  double min_complex = std::numeric_limits<double>::infinity();
  for (int cp = 0; cp < canonical.num_complex(); ++cp) {
    Bundle bundle;
    for (int r = 0; r < next.size(); ++r)
      if (next.owner[r] == canonical.num_basic() + cp) bundle.push_back(r);
    min_complex = std::min(min_complex, canonical.complex_value(cp, bundle));
  }
  local.min_complex_value = canonical.num_complex() == 0 ? 1.0 : min_complex;
  if (stats) *stats = local;

  if (uncovered_after >= local.uncovered_before)
    throw ContractError("augment_once: no progress on uncovered basic players");
  return next;
}

GapResult solve_gap(const CanonicalInstance& canonical, double gamma, int h,
                    const AugSolver& solver, const SolveConfig& config,
                    std::ostream* trace) {
  GapResult out;
  Assignment sigma(canonical.num_resources());
  for (int cp = 0; cp < canonical.num_complex(); ++cp)
    sigma.owner[canonical.private_resource[cp]] = canonical.num_basic() + cp;

  const bool theory = config.mode == Mode::Theory;
  for (int k = 1; k <= std::max(1, config.augment_iteration_cap); ++k) {
    BuiltAug built = build_aug_instance(canonical, sigma, h);
    if (built.nothing_to_augment()) {
      out.kind = GapResult::Kind::Solved;
      out.assignment = sigma;
      out.iterations = k - 1;
      double lo = std::numeric_limits<double>::infinity();
      for (int p = 0; p < canonical.num_players(); ++p) {
        Bundle bundle;
        for (int r = 0; r < sigma.size(); ++r)
          if (sigma.owner[r] == p) bundle.push_back(r);
        lo = std::min(lo, canonical.player_value(p, bundle));
      }
      out.min_value = canonical.num_players() == 0 ? 0.0 : lo;
      if (out.min_value < 1.0 / gamma - kTol) {
        out.kind = GapResult::Kind::Status;
        out.status = "covered all basic players but a complex player fell below 1/gamma";
      }
      return out;
    }

    AugSolverOutcome sol = solver(built, {built.t_vertex});
    if (sol.kind == AugSolverOutcome::Kind::NoSolution) {
      out.kind = GapResult::Kind::Reject;
      out.iterations = k - 1;
      return out;
    }
    if (sol.kind == AugSolverOutcome::Kind::Status) {
      out.kind = GapResult::Kind::Status;
      out.status = sol.status;
      out.iterations = k - 1;
      return out;
    }

    AugmentStats stats;
    try {
      sigma = augment_once(canonical, sigma, built, sol.solution, sol.alpha,
                           sol.beta, gamma, k, theory, &stats);
    } catch (const InputError& e) {
      out.kind = GapResult::Kind::Status;
      out.status = e.what();
      out.iterations = k - 1;
      return out;
    } catch (const ContractError& e) {
      out.kind = GapResult::Kind::Status;
      out.status = e.what();
      out.iterations = k - 1;
      return out;
    }
    if (trace) {
      nlohmann::json j;
      j["iteration"] = k;
      j["uncovered_before"] = stats.uncovered_before;
      j["uncovered_after"] = stats.uncovered_after;
      j["case"] = stats.fresh_sources_case ? "fresh-sources" : "private-release";
      j["min_complex_value"] = stats.min_complex_value;
      j["congestion"] = stats.congestion;
      (*trace) << j.dump() << "\n";
    }
  }
  out.kind = GapResult::Kind::Status;
  out.status = "augmentation iteration cap exhausted";
  return out;
}

}  // namespace santa
