#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "santa/level_graph.hpp"
#include "santa/rational.hpp"

namespace santa {

// Fractional flow on a level, exact rationals (floats only at boundaries).
using RatFlow = std::vector<Rat>;

RatFlow to_rational(const IntFlow& flow);
RatFlow to_rational(const std::vector<double>& flow);
IntFlow to_integral(const RatFlow& flow);  // requires integral entries

struct FlowPath {
  std::vector<int> edges;  // consecutive edge ids from a source to a sink
  Rat weight;              // > 0
};

struct PathDecomposition {
  std::vector<FlowPath> paths;
};

// True iff in-flow equals out-flow at every interior vertex.
bool conserves(const Level& level, const RatFlow& flow);

// Removes circulation from the flow in place; returns the number of cycles
// canceled. Conservation is preserved.
int cancel_cycles(const Level& level, RatFlow& flow);

// Exact path decomposition of a conserving flow: cycles are canceled first,
// afterwards the weighted paths recompose to the (acyclic part of the) flow.
// At most |E| paths.
PathDecomposition decompose_flow(const Level& level, RatFlow flow);
PathDecomposition decompose_flow(const Level& level, const IntFlow& flow);

RatFlow recompose(const PathDecomposition& decomposition, int num_edges);

// Splits integral-weight paths into unit-weight copies.
std::vector<FlowPath> unit_paths(const PathDecomposition& decomposition);

struct MaxFlowResult {
  IntFlow flow;             // per level edge
  std::int64_t value = 0;   // flow into the sink
};

// Maximum integral flow from capacity-bounded sources to one sink, subject to
// per-edge integral capacities. Exact on integral data.
MaxFlowResult max_flow_integral(
    const Level& level,
    const std::vector<std::pair<int, std::int64_t>>& source_capacities,
    int sink_vertex, const IntFlow& edge_capacities);

// A bucket groups edges whose total integral flow must stay within the floor
// and ceiling of the fractional mass. Each bucket must either share a common
// head vertex or consist solely of source out-edges; buckets are disjoint.
struct FlowBucket {
  std::vector<int> edges;
};

struct QuantizeResult {
  bool ok = false;
  IntFlow flow;
  std::int64_t sink_inflow = 0;
  int infeasible_bucket = -1;  // set when !ok
};

// Rounds a conserving fractional flow with congestion <= 1 to a 0/1 flow that
// respects every bucket's floor/ceiling constraint and maximizes the inflow
// into `sink_vertex` (at least the ceiling of the fractional inflow).
// Integral inputs are returned unchanged.
QuantizeResult quantize_flow(const Level& level, const RatFlow& fractional,
                             const std::vector<FlowBucket>& buckets,
                             int sink_vertex);

}  // namespace santa
