#include "santa/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "santa/simplex.hpp"

namespace santa {

BruteOptResult brute_opt(const Instance& instance) {
  const int P = instance.num_players();
  const int R = instance.num_resources();
  if (P == 0) return BruteOptResult{};
  double states = 1.0;
  for (int r = 0; r < R; ++r) {
    states *= P;
    if (states > 1e7) throw CapabilityError("brute_opt: |P|^|R| exceeds 10^7");
  }

  BruteOptResult best;
  best.value = -1.0;
  best.allocation = Assignment(R);
  std::vector<int> owner(R, 0);
  while (true) {
    Assignment a(R);
    a.owner = owner;
    const double v = instance.min_value(a);
    if (v > best.value) {
      best.value = v;
      best.allocation = a;
    }
    int pos = 0;
    while (pos < R && ++owner[pos] == P) owner[pos++] = 0;
    if (pos == R) break;
  }
  if (best.value < 0) best.value = 0.0;
  return best;
}

std::vector<Configuration> enumerate_configurations(const Level& level,
                                                    int sink_vertex, double alpha,
                                                    std::int64_t beta) {
  if (!level.is_sink(sink_vertex))
    throw InputError("enumerate_configurations: vertex is not a sink");
  const int E = level.num_edges();
  if (E > 16) throw CapabilityError("enumerate_configurations: more than 16 edges");
  double states = 1.0;
  for (int e = 0; e < E; ++e) {
    states *= static_cast<double>(beta + 1);
    if (states > 1e7)
      throw CapabilityError("enumerate_configurations: (beta+1)^|E| exceeds 10^7");
  }

  std::vector<Configuration> out;
  IntFlow g(E, 0);
  const int pos_of_sink = level.sink_position(sink_vertex);
  while (true) {
    // Interior conservation, and all flow must terminate at the one sink.
    bool ok = true;
    for (int v = 0; v < level.num_vertices() && ok; ++v) {
      std::int64_t in = 0, outflow = 0;
      for (int e : level.in_edges(v)) in += g[e];
      for (int e : level.out_edges(v)) outflow += g[e];
      if (level.is_source(v)) {
        if (in != 0) ok = false;
      } else if (level.is_sink(v)) {
        if (outflow != 0) ok = false;
        if (v != sink_vertex && in != 0) ok = false;
      } else {
        if (in != outflow) ok = false;
      }
    }
    if (ok) {
      const double cov =
          level.sink_value(pos_of_sink, covered_edges(level, sink_vertex, g));
      if (cov >= 1.0 / alpha - 1e-9) out.push_back({sink_vertex, g, cov});
    }
    int pos = 0;
    while (pos < E && ++g[pos] > beta) g[pos++] = 0;
    if (pos == E) break;
  }
  return out;
}

namespace {

// Flattened exact LP for the recursive configuration program. Variables are
// appended on demand; budget entries can be fixed rationals (the top-level
// parameter) or LP variables (the b_{v,g} split of a parent column).
struct ClpFlattener {
  const AugInstance& aug;
  double alpha;
  std::int64_t beta;
  int columns = 0;
  int num_vars = 0;
  std::vector<LinConstraint> constraints;

  int new_var() { return num_vars++; }

  struct BudgetRef {
    // value = fixed + sum of var terms
    Rat fixed;
    std::vector<std::pair<int, Rat>> terms;
  };

  // Adds the block for CLP_{>= level}(sinks) whose selection total must reach
  // `demand` (fixed 1 at the root, the parent's x_{v,g} below) and whose
  // budget on suffix edge k is budget[k].
  void add_block(int level, const std::vector<int>& sinks,
                 const std::vector<BudgetRef>& budget,
                 const std::optional<int>& demand_var) {
    const Level& lv = aug.level(level);
    const int here = lv.num_edges();
    // usage[e] accumulates flow terms per suffix edge of this block
    std::vector<std::vector<std::pair<int, Rat>>> usage(budget.size());

    for (int v : sinks) {
      std::vector<Configuration> configs =
          enumerate_configurations(lv, v, alpha, beta);
      columns += static_cast<int>(configs.size());
      if (columns > 100000)
        throw CapabilityError("explicit_clp_feasible: more than 10^5 columns");

      LinConstraint select;  // sum_g x_{v,g} >= demand
      select.rel = Rel::Ge;
      for (const Configuration& cfg : configs) {
        const int x = new_var();
        select.terms.push_back({x, Rat(1)});
        for (int e = 0; e < here; ++e)
          if (cfg.flow[e] > 0) usage[e].push_back({x, Rat(cfg.flow[e])});

        if (level + 1 < aug.num_levels()) {
          const std::vector<int> next =
              aug.linked_sinks(level, used_sources(lv, cfg.flow));
          if (!next.empty()) {
            // Child budget variables b_{v,g}(e), constrained to the child
            // block and to the domain [0, beta * x].
            const int child_edges = aug.suffix_edge_count(level + 1);
            std::vector<BudgetRef> child_budget(child_edges);
            for (int k = 0; k < child_edges; ++k) {
              const int bvar = new_var();
              child_budget[k].terms.push_back({bvar, Rat(1)});
              usage[here + k].push_back({bvar, Rat(1)});
              LinConstraint dom;  // b - beta * x <= 0
              dom.rel = Rel::Le;
              dom.rhs = Rat(0);
              dom.terms.push_back({bvar, Rat(1)});
              dom.terms.push_back({x, Rat(-beta)});
              constraints.push_back(std::move(dom));
            }
            add_block(level + 1, next, child_budget, x);
          }
        }
      }
      if (demand_var.has_value()) {
        select.terms.push_back({*demand_var, Rat(-1)});
        select.rhs = Rat(0);
      } else {
        select.rhs = Rat(1);
      }
      constraints.push_back(std::move(select));
    }

    // Budget rows: usage <= budget per suffix edge.
    for (std::size_t k = 0; k < budget.size(); ++k) {
      LinConstraint row;
      row.rel = Rel::Le;
      row.rhs = budget[k].fixed;
      row.terms = usage[k];
      for (const auto& [var, coeff] : budget[k].terms)
        row.terms.push_back({var, -coeff});
      if (!row.terms.empty()) constraints.push_back(std::move(row));
    }
  }
};

}  // namespace

ExplicitClpResult explicit_clp_feasible(const AugInstance& instance, int level,
                                        const std::vector<int>& target_sinks,
                                        const RatVec& budget, double alpha,
                                        std::int64_t beta) {
  if (level < 0 || level >= instance.num_levels())
    throw InputError("explicit_clp_feasible: level out of range");
  if (static_cast<int>(budget.size()) != instance.suffix_edge_count(level))
    throw InputError("explicit_clp_feasible: budget size mismatch");

  ClpFlattener flat{instance, alpha, beta};
  std::vector<ClpFlattener::BudgetRef> b(budget.size());
  for (std::size_t k = 0; k < budget.size(); ++k) b[k].fixed = budget[k];
  flat.add_block(level, target_sinks, b, std::nullopt);

  LinearProgram lp(flat.num_vars);
  for (auto& c : flat.constraints) lp.add_constraint(std::move(c));

  ExplicitClpResult res;
  res.columns = flat.columns;
  res.feasible = lp_feasible(lp).status == LpStatus::Optimal;
  return res;
}

namespace {

// All 0/1 conserving flows of one level (flow may end at any sink).
std::vector<IntFlow> binary_flows(const Level& level) {
  const int E = level.num_edges();
  if (E > 14) throw CapabilityError("brute_aug: more than 14 edges per level");
  std::vector<IntFlow> out;
  for (std::uint32_t mask = 0; mask < (1u << E); ++mask) {
    IntFlow g(E, 0);
    for (int e = 0; e < E; ++e) g[e] = (mask >> e) & 1u;
    bool ok = true;
    for (int v = 0; v < level.num_vertices() && ok; ++v) {
      if (level.is_source(v) || level.is_sink(v)) continue;
      std::int64_t balance = 0;
      for (int e : level.in_edges(v)) balance += g[e];
      for (int e : level.out_edges(v)) balance -= g[e];
      if (balance != 0) ok = false;
    }
    if (ok) out.push_back(std::move(g));
  }
  return out;
}

bool covers_all(const Level& level, const IntFlow& g, const std::vector<int>& sinks) {
  for (int v : sinks) {
    if (!level.is_sink(v)) return false;
    if (level.in_edges(v).empty()) continue;  // degenerate sink counts covered
    if (level.sink_value(level.sink_position(v), covered_edges(level, v, g)) <
        1.0 - 1e-9)
      return false;
  }
  return true;
}

}  // namespace

std::optional<AugSolution> brute_aug(const AugInstance& instance,
                                     const std::vector<int>& target_sinks) {
  const int h = instance.num_levels();
  std::vector<std::vector<IntFlow>> flows_per_level;
  for (int i = 0; i < h; ++i) flows_per_level.push_back(binary_flows(instance.level(i)));

  std::map<std::pair<int, std::vector<int>>, std::optional<std::vector<IntFlow>>> memo;
  std::function<std::optional<std::vector<IntFlow>>(int, std::vector<int>)> search =
      [&](int i, std::vector<int> required) -> std::optional<std::vector<IntFlow>> {
    std::sort(required.begin(), required.end());
    const auto key = std::make_pair(i, required);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<std::vector<IntFlow>> result;
    for (const IntFlow& g : flows_per_level[i]) {
      if (!covers_all(instance.level(i), g, required)) continue;
      if (i + 1 == h) {
        result = std::vector<IntFlow>{g};
        break;
      }
      std::vector<int> next =
          instance.linked_sinks(i, used_sources(instance.level(i), g));
      if (auto rest = search(i + 1, std::move(next))) {
        rest->insert(rest->begin(), g);
        result = std::move(rest);
        break;
      }
    }
    memo[key] = result;
    return result;
  };

  auto flows = search(0, target_sinks);
  if (!flows) return std::nullopt;
  AugSolution sol;
  sol.flows = std::move(*flows);
  sol.congestion = 1;
  return sol;
}

}  // namespace santa
