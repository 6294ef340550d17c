#include "santa/rounding.hpp"

#include <algorithm>
#include <cmath>

#include "santa/rng.hpp"

namespace santa {

RoundLevelResult round_level(const AugInstance& instance, const DwWitness& witness,
                             const std::vector<int>& target_sinks, double gamma,
                             const RoundingConfig& config, std::uint64_t seed) {
  const int level = witness.level;
  const Level& lv = instance.level(level);
  const int here = lv.num_edges();
  const bool has_next = level + 1 < instance.num_levels();
  const int m2 = has_next ? instance.suffix_edge_count(level + 1) : 0;
  const int n = instance.total_vertices();
  const double gamma_next = gamma * (1.0 + 1.0 / log2_clamped(n));

  // Entries per sink, weights renormalized to sum exactly 1.
  std::map<int, std::vector<const DwEntry*>> per_sink;
  std::map<int, double> total_weight;
  for (const DwEntry& e : witness.entries) {
    if (e.weight <= 0) continue;
    per_sink[e.column.sink_vertex].push_back(&e);
    total_weight[e.column.sink_vertex] += e.weight;
  }
  for (int v : target_sinks) {
    if (lv.in_edges(v).empty()) continue;  // degenerate sinks need nothing
    auto it = total_weight.find(v);
    if (it == total_weight.end() || it->second <= 0)
      throw InputError("round_level: witness has no configuration for a target sink");
  }

  std::string last_violation = "no target sinks";
  for (int attempt = 0; attempt < std::max(1, config.attempt_cap); ++attempt) {
    RoundLevelResult result;
    result.flow.assign(here, 0);
    result.attempts = attempt + 1;
    Eigen::VectorXd next_budget = Eigen::VectorXd::Zero(m2);
    std::shared_ptr<const DwWitness> merged;
    bool sampled_any = false;

    for (int v : target_sinks) {
      auto it = per_sink.find(v);
      if (it == per_sink.end()) continue;  // degenerate
      // Counter-based stream keyed by (seed, level, sink, attempt): the draw
      // is independent of scheduling order.
      auto rng = make_rng(seed, 0x726c766cULL, static_cast<std::uint64_t>(level),
                          static_cast<std::uint64_t>(v),
                          static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      double u = unif(rng) * total_weight[v];
      const DwEntry* chosen = it->second.back();
      for (const DwEntry* e : it->second) {
        if (u < e->weight) {
          chosen = e;
          break;
        }
        u -= e->weight;
      }
      sampled_any = true;
      for (int e = 0; e < here; ++e) result.flow[e] += chosen->column.flow[e];
      if (has_next && chosen->column.d.size() == m2) next_budget += chosen->column.d;
      if (has_next && chosen->column.d_witness) {
        merged = merged ? merge_witnesses(*merged, *chosen->column.d_witness)
                        : chosen->column.d_witness;
      }
    }

    result.max_congestion = 0;
    for (std::int64_t f : result.flow)
      result.max_congestion = std::max(result.max_congestion, f);
    if (static_cast<double>(result.max_congestion) > 2.0 * gamma + 1e-9) {
      last_violation = "congestion above 2*gamma";
      continue;
    }
    if (has_next) {
      bool over = false;
      for (int k = 0; k < m2; ++k)
        if (next_budget[k] > gamma_next + 1e-9) over = true;
      if (over) {
        last_violation = "next-level budget above gamma*(1+1/log n)";
        continue;
      }
    }

    if (merged) {
      result.next = merged;
      result.next_sinks = merged->sinks;
    } else if (has_next) {
      auto empty = std::make_shared<DwWitness>();
      empty->level = level + 1;
      empty->budget = Eigen::VectorXd::Zero(m2);
      result.next = empty;
    }
    (void)sampled_any;
    return result;
  }
  throw BudgetExhausted("round_level: attempt cap exhausted (" + last_violation + ")");
}

RoundAllResult round_all_levels(const AugInstance& instance,
                                const DwWitness& top_witness,
                                const std::vector<int>& target_sinks, double gamma0,
                                const RoundingConfig& config, std::uint64_t seed) {
  RoundAllResult out;
  const int h = instance.num_levels();
  out.solution.flows.resize(h);

  std::shared_ptr<const DwWitness> witness =
      std::make_shared<DwWitness>(top_witness);
  std::vector<int> sinks = target_sinks;
  double gamma = gamma0;
  for (int i = 0; i < h; ++i) {
    out.gamma_schedule.push_back(gamma);
    if (witness->level != i)
      throw InputError("round_all_levels: witness level mismatch");
    RoundLevelResult lvl = round_level(instance, *witness, sinks, gamma, config, seed);
    out.solution.flows[i] = std::move(lvl.flow);
    out.max_congestion = std::max(out.max_congestion, lvl.max_congestion);
    if (i + 1 < h) {
      if (!lvl.next)
        throw ContractError("round_all_levels: missing next-level claim");
      witness = lvl.next;
      sinks = lvl.next_sinks;
      gamma *= 1.0 + 1.0 / log2_clamped(instance.total_vertices());
    }
  }
  out.solution.congestion = std::max<std::int64_t>(1, out.max_congestion);
  return out;
}

}  // namespace santa
