#include "santa/aug_build.hpp"

#include <algorithm>

namespace santa {

namespace {

constexpr double kTol = 1e-9;

// Valuation over a sink's local in-edge positions, backed by a player oracle
// over the resources those edges come from.
class EdgeResourceValuation final : public Valuation {
 public:
  EdgeResourceValuation(ValuationOracle base, std::vector<int> resource_of_local)
      : base_(std::move(base)), resource_of_(std::move(resource_of_local)) {}

  double eval(const Bundle& local) const override {
    std::vector<int> resources;
    for (int pos : local) resources.push_back(resource_of_[pos]);
    return base_.evaluate(make_bundle(std::move(resources)));
  }

  std::vector<int> support() const override {
    std::vector<int> all(resource_of_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }

 private:
  ValuationOracle base_;
  std::vector<int> resource_of_;
};

}  // namespace

Assignment sigma_bar(const CanonicalInstance& c, const Assignment& sigma) {
  if (sigma.size() != c.num_resources())
    throw InputError("sigma_bar: assignment size mismatch");
  Assignment out(c.num_resources());
  for (int r = 0; r < sigma.size(); ++r) {
    const int p = sigma.owner[r];
    if (p != Assignment::kUnassigned && c.singleton_is_one(p, r))
      out.owner[r] = p;
  }
  return out;
}

BuiltAug build_aug_instance(const CanonicalInstance& c, const Assignment& sigma,
                            int h) {
  if (h < 1) throw InputError("build_aug_instance: h must be >= 1");
  const int R = c.num_resources();
  const int B = c.num_basic();
  const int C = c.num_complex();

  BuiltAug built;
  built.cleaned = sigma_bar(c, sigma);
  const Assignment& bar = built.cleaned;

  built.resource_vertex.resize(R);
  built.basic_vertex.resize(B);
  built.complex_source_vertex.resize(C);
  built.complex_target_vertex.resize(C);
  built.unassigned_source_vertex.assign(R, -1);

  int next = 0;
  for (int r = 0; r < R; ++r) {
    built.resource_vertex[r] = next++;
    built.vertex_info.push_back({AugVertexKind::Resource, r});
  }
  for (int b = 0; b < B; ++b) {
    built.basic_vertex[b] = next++;
    built.vertex_info.push_back({AugVertexKind::BasicPlayer, b});
  }
  for (int cp = 0; cp < C; ++cp) {
    built.complex_source_vertex[cp] = next++;
    built.vertex_info.push_back({AugVertexKind::ComplexSource, cp});
  }
  for (int cp = 0; cp < C; ++cp) {
    built.complex_target_vertex[cp] = next++;
    built.vertex_info.push_back({AugVertexKind::ComplexTarget, cp});
  }
  built.t_vertex = next++;
  built.vertex_info.push_back({AugVertexKind::SinkT, -1});
  for (int r = 0; r < R; ++r) {
    if (bar.owner[r] == Assignment::kUnassigned) {
      built.unassigned_source_vertex[r] = next++;
      built.vertex_info.push_back({AugVertexKind::SourceS, r});
    }
  }
  const int num_vertices = next;

  std::vector<LevelEdge> edges;
  auto add_edge = [&](int from, int to, AugEdgeInfo info) {
    edges.push_back({from, to});
    built.edge_info.push_back(info);
  };

  // r -> q for every player q valuing r positively that does not hold it.
  for (int r = 0; r < R; ++r) {
    for (int p = 0; p < c.num_players(); ++p) {
      if (bar.owner[r] == p) continue;
      if (c.singleton_value(p, r) <= kTol) continue;
      const int target = c.is_basic(p)
                             ? built.basic_vertex[p]
                             : built.complex_target_vertex[c.complex_index(p)];
      add_edge(built.resource_vertex[r], target,
               {AugEdgeKind::ResourceToPlayer, r, p});
    }
  }
  // q -> r for every held resource (by construction f_q({r}) = 1).
  for (int r = 0; r < R; ++r) {
    const int p = bar.owner[r];
    if (p == Assignment::kUnassigned) continue;
    const int from = c.is_basic(p)
                         ? built.basic_vertex[p]
                         : built.complex_source_vertex[c.complex_index(p)];
    add_edge(from, built.resource_vertex[r], {AugEdgeKind::PlayerToResource, r, p});
  }
  // s(r) -> r for unassigned resources.
  for (int r = 0; r < R; ++r) {
    if (built.unassigned_source_vertex[r] >= 0)
      add_edge(built.unassigned_source_vertex[r], built.resource_vertex[r],
               {AugEdgeKind::SourceToResource, r, -1});
  }
  // uncovered basic players -> t.
  std::vector<char> covered(B, 0);
  for (int r = 0; r < R; ++r)
    if (bar.owner[r] != Assignment::kUnassigned && c.is_basic(bar.owner[r]))
      covered[bar.owner[r]] = 1;
  for (int b = 0; b < B; ++b) {
    if (!covered[b]) {
      built.uncovered_basics.push_back(b);
      add_edge(built.basic_vertex[b], built.t_vertex,
               {AugEdgeKind::PlayerToT, -1, b});
    }
  }

  std::vector<int> sources;
  for (int cp = 0; cp < C; ++cp) sources.push_back(built.complex_source_vertex[cp]);
  for (int r = 0; r < R; ++r)
    if (built.unassigned_source_vertex[r] >= 0)
      sources.push_back(built.unassigned_source_vertex[r]);
  std::sort(sources.begin(), sources.end());

  // Per-sink local in-edge lists, in edge-id order.
  std::vector<std::vector<int>> in_of(num_vertices);
  for (std::size_t e = 0; e < edges.size(); ++e)
    in_of[edges[e].to].push_back(static_cast<int>(e));

  std::vector<Sink> sinks;
  for (int cp = 0; cp < C; ++cp) {
    const int v = built.complex_target_vertex[cp];
    std::vector<int> resource_of_local;
    for (int e : in_of[v]) resource_of_local.push_back(built.edge_info[e].resource);
    sinks.push_back(
        {v, ValuationOracle(ValuationKind::Derived,
                            std::make_shared<EdgeResourceValuation>(
                                c.complex_oracle(cp), std::move(resource_of_local)))});
  }
  {
    // f_t(A) = |A| / |delta(t)|; the empty-degree case degenerates to 0.
    std::map<int, double> shares;
    const int deg = static_cast<int>(in_of[built.t_vertex].size());
    for (int i = 0; i < deg; ++i) shares[i] = 1.0 / deg;
    sinks.push_back({built.t_vertex, ValuationOracle::additive(std::move(shares))});
  }

  Level level(num_vertices, edges, sources, sinks);
  std::vector<Level> levels(static_cast<std::size_t>(h), level);

  std::vector<std::vector<LinkingEdge>> links;
  for (int i = 0; i + 1 < h; ++i) {
    std::vector<LinkingEdge> li;
    for (int cp = 0; cp < C; ++cp)
      li.push_back({built.complex_target_vertex[cp], built.complex_source_vertex[cp]});
    links.push_back(std::move(li));
  }

  built.instance = AugInstance(std::move(levels), std::move(links));
  return built;
}

}  // namespace santa
