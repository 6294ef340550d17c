#pragma once

#include "santa/canonical.hpp"
#include "santa/level_graph.hpp"

namespace santa {

enum class AugVertexKind {
  Resource,       // one per canonical resource
  BasicPlayer,    // one per basic player
  ComplexSource,  // source copy of a complex player
  ComplexTarget,  // sink copy of a complex player
  SinkT,          // the sink collecting uncovered basic players
  SourceS,        // s(r) for an unassigned resource r
};

struct AugVertexInfo {
  AugVertexKind kind;
  int index = -1;  // resource id or player id, depending on kind
};

enum class AugEdgeKind {
  ResourceToPlayer,  // r -> q, f_q({r}) > 0, sigma_bar(r) != q
  PlayerToResource,  // q -> r, sigma_bar(r) == q
  SourceToResource,  // s(r) -> r
  PlayerToT,         // uncovered basic player -> t
};

struct AugEdgeInfo {
  AugEdgeKind kind;
  int resource = -1;
  int player = -1;  // canonical player index (basic-then-complex order)
};

// The augmentation instance constructed from a canonical instance and an
// assignment: h identical levels plus per-vertex / per-edge semantics used
// to translate flows back into reassignments.
struct BuiltAug {
  AugInstance instance;
  Assignment cleaned;  // sigma_bar of the input assignment

  std::vector<AugVertexInfo> vertex_info;  // per vertex, identical levels
  std::vector<AugEdgeInfo> edge_info;      // per edge id, identical levels

  std::vector<int> resource_vertex;         // resource -> vertex
  std::vector<int> basic_vertex;            // basic player -> vertex
  std::vector<int> complex_source_vertex;   // complex player -> C^S vertex
  std::vector<int> complex_target_vertex;   // complex player -> C^T vertex
  int t_vertex = -1;
  std::vector<int> unassigned_source_vertex;  // resource -> s(r) vertex or -1

  std::vector<int> uncovered_basics;  // basic players with an edge to t
  bool nothing_to_augment() const { return uncovered_basics.empty(); }
};

// sigma with every resource dropped whose owner does not value it at exactly
// 1 (complex players release their small resources).
Assignment sigma_bar(const CanonicalInstance& c, const Assignment& sigma);

BuiltAug build_aug_instance(const CanonicalInstance& c, const Assignment& sigma,
                            int h);

}  // namespace santa
