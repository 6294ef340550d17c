#pragma once

#include <optional>
#include <vector>

#include "santa/instance.hpp"
#include "santa/level_graph.hpp"
#include "santa/rational.hpp"

namespace santa {

// Ground-truth brute force. Every routine here is deterministic, exact where
// it speaks rationals, and independent of the solver code paths it anchors.

struct BruteOptResult {
  double value = 0.0;
  Assignment allocation;
};

// Exact max-min optimum by enumerating all |P|^|R| total assignments.
// Capability bound: |P|^|R| <= 10^7.
BruteOptResult brute_opt(const Instance& instance);

struct Configuration {
  int sink_vertex = -1;
  IntFlow flow;
  double coverage = 0.0;  // f_v(flow edges incident to the sink)
};

// Complete C(v, alpha, beta): integral flows of congestion <= beta ending at
// v with coverage >= 1/alpha. Capability bounds: <= 16 edges and
// (beta+1)^|E| <= 10^7 candidates.
std::vector<Configuration> enumerate_configurations(const Level& level,
                                                    int sink_vertex, double alpha,
                                                    std::int64_t beta);

struct ExplicitClpResult {
  bool feasible = false;
  int columns = 0;  // size of the flattened LP
};

// Exact rational feasibility of the multi-level configuration LP over the
// level suffix starting at `level`, with budget vector `b` laid out per
// AugInstance::suffix_offset. Capability bound: <= 10^5 columns.
ExplicitClpResult explicit_clp_feasible(const AugInstance& instance, int level,
                                        const std::vector<int>& target_sinks,
                                        const RatVec& budget, double alpha,
                                        std::int64_t beta);

// Exhaustive search for a coverage-1 congestion-1 solution; nullopt when no
// such solution exists. Capability bound: <= 14 edges per level.
std::optional<AugSolution> brute_aug(const AugInstance& instance,
                                     const std::vector<int>& target_sinks);

}  // namespace santa
