#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "santa/valuation.hpp"

namespace santa {

struct LevelEdge {
  int from = -1;
  int to = -1;
};

// A sink together with its valuation over incident edges. The oracle's
// ground set is the local positions 0..deg-1 of the sink's in-edges in
// edge-id order (the fixed order used everywhere for reproducibility).
struct Sink {
  int vertex = -1;
  ValuationOracle valuation;
};

// One level of the augmentation problem: directed graph, sources with
// out-degree at most one and no in-edges, sinks with in-edges only.
class Level {
 public:
  Level() = default;
  Level(int num_vertices, std::vector<LevelEdge> edges, std::vector<int> sources,
        std::vector<Sink> sinks);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<LevelEdge>& edges() const { return edges_; }
  const LevelEdge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  const std::vector<int>& sources() const { return sources_; }
  const std::vector<Sink>& sinks() const { return sinks_; }
  bool is_source(int v) const { return source_mark_[v]; }
  bool is_sink(int v) const { return sink_mark_[v]; }
  int sink_position(int v) const { return sink_pos_[v]; }  // -1 if not a sink
  // The unique out-edge of a source, or nullopt for a degenerate source that
  // cannot carry flow.
  std::optional<int> source_out_edge(int v) const;

  // f_v of the set of incident edges named by global edge ids (duplicates ok).
  double sink_value(int sink_pos, const std::vector<int>& incident_edges) const;

 private:
  int num_vertices_ = 0;
  std::vector<LevelEdge> edges_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> sources_;
  std::vector<Sink> sinks_;
  std::vector<char> source_mark_, sink_mark_;
  std::vector<int> sink_pos_;
};

// Integer flow on a level, indexed by edge id.
using IntFlow = std::vector<std::int64_t>;

// Linking edge from a sink of level i+1 down to a source of level i.
struct LinkingEdge {
  int upper_sink = -1;   // vertex in level i+1
  int lower_source = -1; // vertex in level i
};

class AugInstance {
 public:
  AugInstance() = default;
  AugInstance(std::vector<Level> levels, std::vector<std::vector<LinkingEdge>> links);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const Level& level(int i) const { return levels_[i]; }
  // Linking edges between level i+1 and level i (0-based), i in [0, h-2].
  const std::vector<LinkingEdge>& links(int i) const { return links_[i]; }
  // Total vertex count over all levels (the "n" of all bounds).
  int total_vertices() const;

  // Sink vertex of level i+1 linked to the given source of level i.
  std::optional<int> linked_sink(int i, int source_vertex) const;
  // L_i(U) for a set of level-i source vertices, sorted.
  std::vector<int> linked_sinks(int i, const std::vector<int>& sources) const;

  // Budget vectors over the level suffix E_{>= i} are stored flat, level i
  // first; these give the layout.
  int suffix_edge_count(int i) const;
  int suffix_offset(int i, int j) const;  // start of level j edges, j >= i

 private:
  std::vector<Level> levels_;
  std::vector<std::vector<LinkingEdge>> links_;
};

struct AugSolution {
  std::vector<IntFlow> flows;       // one per level
  std::int64_t congestion = 1;      // the beta this solution claims
};

struct FeasibilityReport {
  bool ok = true;
  std::string reason;
  int level = -1;
  int location = -1;  // vertex or edge id, depending on the reason

  explicit operator bool() const { return ok; }
};

// Sources of level i actually used by the flow (positive flow on the
// out-edge), sorted by vertex id.
std::vector<int> used_sources(const Level& level, const IntFlow& flow);

// Edges with positive flow that are incident to the sink.
std::vector<int> covered_edges(const Level& level, int sink_vertex,
                               const IntFlow& flow);

// Verifies conservation, congestion <= beta and 1/alpha-coverage of the
// required sinks at every level. A sink with no incident edges counts as
// covered.
FeasibilityReport check_feasible(const AugInstance& instance,
                                 const AugSolution& solution,
                                 const std::vector<int>& target_sinks,
                                 double alpha, std::int64_t beta,
                                 double tol = 1e-9);

// Debug serialization (levels, edges, linking pairs).
std::string aug_instance_to_json(const AugInstance& instance);

}  // namespace santa
