#include "santa/flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>

namespace santa {

RatFlow to_rational(const IntFlow& flow) {
  RatFlow out(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) out[i] = Rat(flow[i]);
  return out;
}

RatFlow to_rational(const std::vector<double>& flow) {
  RatFlow out(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) out[i] = rat_from_double(flow[i]);
  return out;
}

IntFlow to_integral(const RatFlow& flow) {
  IntFlow out(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (denominator(flow[i]) != 1)
      throw InputError("to_integral: flow entry is not integral");
    out[i] = numerator(flow[i]).convert_to<std::int64_t>();
  }
  return out;
}

bool conserves(const Level& level, const RatFlow& flow) {
  for (int v = 0; v < level.num_vertices(); ++v) {
    if (level.is_source(v) || level.is_sink(v)) continue;
    Rat balance(0);
    for (int e : level.in_edges(v)) balance += flow[e];
    for (int e : level.out_edges(v)) balance -= flow[e];
    if (balance != 0) return false;
  }
  return true;
}

int cancel_cycles(const Level& level, RatFlow& flow) {
  int canceled = 0;
  while (true) {
    // DFS over positive-flow edges looking for a back edge.
    std::vector<int> state(level.num_vertices(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<int> via_edge(level.num_vertices(), -1);
    std::vector<int> cycle;
    std::function<bool(int)> dfs = [&](int v) {
      state[v] = 1;
      for (int e : level.out_edges(v)) {
        if (flow[e] <= 0) continue;
        const int w = level.edge(e).to;
        if (state[w] == 1) {
          // unwind the stack from v back to w
          cycle.push_back(e);
          int cur = v;
          while (cur != w) {
            cycle.push_back(via_edge[cur]);
            cur = level.edge(via_edge[cur]).from;
          }
          return true;
        }
        if (state[w] == 0) {
          via_edge[w] = e;
          if (dfs(w)) return true;
        }
      }
      state[v] = 2;
      return false;
    };
    bool found = false;
    for (int v = 0; v < level.num_vertices() && !found; ++v)
      if (state[v] == 0 && dfs(v)) found = true;
    if (!found) return canceled;
    Rat slack = flow[cycle.front()];
    for (int e : cycle) slack = std::min(slack, flow[e]);
    for (int e : cycle) flow[e] -= slack;
    ++canceled;
  }
}

PathDecomposition decompose_flow(const Level& level, RatFlow flow) {
  if (static_cast<int>(flow.size()) != level.num_edges())
    throw InputError("decompose_flow: flow size mismatch");
  for (const Rat& f : flow)
    if (f < 0) throw InputError("decompose_flow: negative flow");
  if (!conserves(level, flow))
    throw InputError("decompose_flow: flow does not conserve at interior vertices");
  cancel_cycles(level, flow);

  PathDecomposition out;
  for (int s : level.sources()) {
    auto first = level.source_out_edge(s);
    if (!first) continue;
    while (flow[*first] > 0) {
      FlowPath path;
      path.weight = flow[*first];
      int e = *first;
      while (true) {
        path.edges.push_back(e);
        path.weight = std::min(path.weight, flow[e]);
        const int v = level.edge(e).to;
        if (level.is_sink(v)) break;
        int next = -1;
        for (int cand : level.out_edges(v)) {
          if (flow[cand] > 0) {
            next = cand;
            break;
          }
        }
        if (next < 0)
          throw ContractError("decompose_flow: stuck at an interior vertex");
        e = next;
      }
      for (int used : path.edges) flow[used] -= path.weight;
      out.paths.push_back(std::move(path));
    }
  }
  for (const Rat& f : flow)
    if (f != 0)
      throw ContractError("decompose_flow: residual flow after peeling paths");
  return out;
}

PathDecomposition decompose_flow(const Level& level, const IntFlow& flow) {
  return decompose_flow(level, to_rational(flow));
}

RatFlow recompose(const PathDecomposition& decomposition, int num_edges) {
  RatFlow out(num_edges, Rat(0));
  for (const FlowPath& p : decomposition.paths)
    for (int e : p.edges) out[e] += p.weight;
  return out;
}

std::vector<FlowPath> unit_paths(const PathDecomposition& decomposition) {
  std::vector<FlowPath> out;
  for (const FlowPath& p : decomposition.paths) {
    if (denominator(p.weight) != 1)
      throw InputError("unit_paths: path weight is not integral");
    const std::int64_t w = numerator(p.weight).convert_to<std::int64_t>();
    for (std::int64_t i = 0; i < w; ++i) out.push_back({p.edges, Rat(1)});
  }
  return out;
}

namespace {

// Dinic with int64 capacities.
class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), dist_(n), it_(n) {}

  int add_arc(int from, int to, std::int64_t cap) {
    adj_[from].push_back({to, cap, static_cast<int>(adj_[to].size()), 0});
    adj_[to].push_back({from, 0, static_cast<int>(adj_[from].size()) - 1, 0});
    return static_cast<int>(adj_[from].size()) - 1;
  }

  std::int64_t flow_on(int from, int arc) const { return adj_[from][arc].flow; }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max()))
        total += pushed;
    }
    return total;
  }

 private:
  struct Arc {
    int to;
    std::int64_t cap;
    int rev;
    std::int64_t flow;
  };

  bool bfs(int s, int t) {
    std::fill(dist_.begin(), dist_.end(), -1);
    std::queue<int> q;
    dist_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : adj_[v]) {
        if (a.cap - a.flow > 0 && dist_[a.to] < 0) {
          dist_[a.to] = dist_[v] + 1;
          q.push(a.to);
        }
      }
    }
    return dist_[t] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t limit) {
    if (v == t) return limit;
    for (int& i = it_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      Arc& a = adj_[v][i];
      if (a.cap - a.flow <= 0 || dist_[a.to] != dist_[v] + 1) continue;
      std::int64_t pushed = dfs(a.to, t, std::min(limit, a.cap - a.flow));
      if (pushed > 0) {
        a.flow += pushed;
        adj_[a.to][a.rev].flow -= pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> dist_;
  std::vector<int> it_;
};

}  // namespace

MaxFlowResult max_flow_integral(
    const Level& level,
    const std::vector<std::pair<int, std::int64_t>>& source_capacities,
    int sink_vertex, const IntFlow& edge_capacities) {
  if (static_cast<int>(edge_capacities.size()) != level.num_edges())
    throw InputError("max_flow_integral: capacity vector size mismatch");
  for (std::int64_t c : edge_capacities)
    if (c < 0) throw InputError("max_flow_integral: negative capacity");

  const int super = level.num_vertices();
  Dinic dinic(level.num_vertices() + 1);
  std::vector<std::pair<int, int>> arc_of_edge(level.num_edges());
  for (int e = 0; e < level.num_edges(); ++e)
    arc_of_edge[e] = {level.edge(e).from,
                      dinic.add_arc(level.edge(e).from, level.edge(e).to,
                                    edge_capacities[e])};
  for (const auto& [v, cap] : source_capacities) {
    if (cap < 0) throw InputError("max_flow_integral: negative source capacity");
    dinic.add_arc(super, v, cap);
  }

  MaxFlowResult result;
  result.value = dinic.run(super, sink_vertex);
  result.flow.assign(level.num_edges(), 0);
  for (int e = 0; e < level.num_edges(); ++e)
    result.flow[e] = dinic.flow_on(arc_of_edge[e].first, arc_of_edge[e].second);
  return result;
}

namespace {

struct BoundedArc {
  int from, to;
  std::int64_t lower, upper;
  int edge_id;  // original level edge carried by this arc, or -1
};

}  // namespace

QuantizeResult quantize_flow(const Level& level, const RatFlow& fractional,
                             const std::vector<FlowBucket>& buckets,
                             int sink_vertex) {
  if (static_cast<int>(fractional.size()) != level.num_edges())
    throw InputError("quantize_flow: flow size mismatch");
  for (const Rat& f : fractional) {
    if (f < 0) throw InputError("quantize_flow: negative flow");
    if (f > 1) throw InputError("quantize_flow: congestion above 1");
  }
  if (!conserves(level, fractional))
    throw InputError("quantize_flow: flow does not conserve");

  QuantizeResult result;

  // Idempotence: an already 0/1-integral flow is returned unchanged.
  bool integral = true;
  for (const Rat& f : fractional)
    if (f != 0 && f != 1) {
      integral = false;
      break;
    }
  if (integral) {
    result.ok = true;
    result.flow = to_integral(fractional);
    for (int e : level.in_edges(sink_vertex)) result.sink_inflow += result.flow[e];
    return result;
  }

  // Validate bucket shapes and disjointness.
  std::vector<int> bucket_of(level.num_edges(), -1);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (buckets[b].edges.empty())
      throw InputError("quantize_flow: empty bucket");
    bool common_head = true, all_source_edges = true;
    const int head = level.edge(buckets[b].edges.front()).to;
    for (int e : buckets[b].edges) {
      if (e < 0 || e >= level.num_edges())
        throw InputError("quantize_flow: bucket edge out of range");
      if (bucket_of[e] != -1) throw InputError("quantize_flow: buckets overlap");
      bucket_of[e] = static_cast<int>(b);
      if (level.edge(e).to != head) common_head = false;
      if (!level.is_source(level.edge(e).from)) all_source_edges = false;
    }
    if (!common_head && !all_source_edges)
      throw InputError(
          "quantize_flow: bucket must share a head vertex or consist of source "
          "out-edges");
  }

  // Gadget graph: SS, TT, level vertices, one dummy per bucket.
  const int V = level.num_vertices();
  const int ss = V, tt = V + 1;
  int next_node = V + 2;
  std::vector<int> bucket_node(buckets.size());
  for (std::size_t b = 0; b < buckets.size(); ++b) bucket_node[b] = next_node++;

  std::vector<BoundedArc> arcs;
  std::vector<Rat> bucket_mass(buckets.size(), Rat(0));
  for (std::size_t b = 0; b < buckets.size(); ++b)
    for (int e : buckets[b].edges) bucket_mass[b] += fractional[e];

  std::vector<char> head_bucket(buckets.size(), 0);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    bool common_head = true;
    const int head = level.edge(buckets[b].edges.front()).to;
    for (int e : buckets[b].edges)
      if (level.edge(e).to != head) common_head = false;
    head_bucket[b] = common_head ? 1 : 0;
  }

  for (int e = 0; e < level.num_edges(); ++e) {
    const auto& [from, to] = level.edge(e);
    const int b = bucket_of[e];
    if (b >= 0 && head_bucket[b]) {
      arcs.push_back({from, bucket_node[b], 0, 1, e});
    } else {
      arcs.push_back({from, to, 0, 1, e});
    }
  }
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    const std::int64_t lo = rat_floor(bucket_mass[b]).convert_to<std::int64_t>();
    const std::int64_t hi = rat_ceil(bucket_mass[b]).convert_to<std::int64_t>();
    if (head_bucket[b]) {
      arcs.push_back({bucket_node[b], level.edge(buckets[b].edges.front()).to,
                      lo, hi, -1});
    } else {
      // Source-out-edge bucket: feed the involved sources through the dummy.
      arcs.push_back({ss, bucket_node[b], lo, hi, -1});
      for (int e : buckets[b].edges)
        arcs.push_back({bucket_node[b], level.edge(e).from, 0, 1, -1});
    }
  }
  // Unbucketed sources draw from SS directly.
  std::vector<char> source_in_bucket(level.num_vertices(), 0);
  for (std::size_t b = 0; b < buckets.size(); ++b)
    if (!head_bucket[b])
      for (int e : buckets[b].edges) source_in_bucket[level.edge(e).from] = 1;
  for (int s : level.sources())
    if (!source_in_bucket[s]) arcs.push_back({ss, s, 0, 1, -1});
  // Every sink drains into TT.
  const std::int64_t big = level.num_edges() + 1;
  for (const Sink& snk : level.sinks()) arcs.push_back({snk.vertex, tt, 0, big, -1});

  // Phase 1: a feasible flow respecting lower bounds, via the standard
  // excess/deficit reduction on the circulation closure. `relaxed` drops one
  // bucket's lower bound, used only to name a culprit on infeasibility.
  const int aux_s = next_node, aux_t = next_node + 1;
  auto solve_phase1 = [&](int relaxed_bucket,
                          std::vector<std::int64_t>* base) -> bool {
    std::vector<BoundedArc> local = arcs;
    if (relaxed_bucket >= 0) {
      // Bucket lower bounds live on the dummy arc with edge_id == -1 adjacent
      // to that bucket's node.
      for (auto& a : local)
        if (a.edge_id < 0 && (a.from == bucket_node[relaxed_bucket] ||
                              a.to == bucket_node[relaxed_bucket]))
          a.lower = 0;
    }
    Dinic dinic(next_node + 2);
    std::vector<std::int64_t> excess(next_node + 2, 0);
    std::vector<std::pair<int, int>> ref(local.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
      const auto& a = local[i];
      ref[i] = {a.from, dinic.add_arc(a.from, a.to, a.upper - a.lower)};
      excess[a.to] += a.lower;
      excess[a.from] -= a.lower;
    }
    dinic.add_arc(tt, ss, big * 4);  // circulation closure
    std::int64_t need = 0;
    for (int v = 0; v < next_node; ++v) {
      if (excess[v] > 0) {
        dinic.add_arc(aux_s, v, excess[v]);
        need += excess[v];
      } else if (excess[v] < 0) {
        dinic.add_arc(v, aux_t, -excess[v]);
      }
    }
    if (dinic.run(aux_s, aux_t) < need) return false;
    if (base) {
      base->assign(arcs.size(), 0);
      for (std::size_t i = 0; i < local.size(); ++i)
        (*base)[i] = dinic.flow_on(ref[i].first, ref[i].second) + local[i].lower;
    }
    return true;
  };

  std::vector<std::int64_t> base;
  if (!solve_phase1(-1, &base)) {
    result.ok = false;
    result.infeasible_bucket = 0;
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (solve_phase1(static_cast<int>(b), nullptr)) {
        result.infeasible_bucket = static_cast<int>(b);
        break;
      }
    }
    return result;
  }

  // Phase 2: maximize the sink inflow over the residual of the feasible flow.
  Dinic residual(next_node);
  std::vector<std::pair<int, int>> fwd(arcs.size()), bwd(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& a = arcs[i];
    fwd[i] = {a.from, residual.add_arc(a.from, a.to, a.upper - base[i])};
    bwd[i] = {a.to, residual.add_arc(a.to, a.from, base[i] - a.lower)};
  }
  residual.run(ss, sink_vertex);

  result.ok = true;
  result.flow.assign(level.num_edges(), 0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].edge_id >= 0) {
      const std::int64_t f = base[i] +
                             residual.flow_on(fwd[i].first, fwd[i].second) -
                             residual.flow_on(bwd[i].first, bwd[i].second);
      result.flow[arcs[i].edge_id] = f;
    }
  }
  for (int e : level.in_edges(sink_vertex)) result.sink_inflow += result.flow[e];

  const Rat frac_inflow = [&] {
    Rat s(0);
    for (int e : level.in_edges(sink_vertex)) s += fractional[e];
    return s;
  }();
  if (Rat(result.sink_inflow) < frac_inflow)
    throw ContractError("quantize_flow: integral sink inflow below the fractional mass");
  return result;
}

}  // namespace santa
