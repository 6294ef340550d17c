#include "santa/level_graph.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace santa {

Level::Level(int num_vertices, std::vector<LevelEdge> edges,
             std::vector<int> sources, std::vector<Sink> sinks)
    : num_vertices_(num_vertices),
      edges_(std::move(edges)),
      sources_(std::move(sources)),
      sinks_(std::move(sinks)) {
  out_.assign(num_vertices_, {});
  in_.assign(num_vertices_, {});
  source_mark_.assign(num_vertices_, 0);
  sink_mark_.assign(num_vertices_, 0);
  sink_pos_.assign(num_vertices_, -1);

  for (int e = 0; e < num_edges(); ++e) {
    const auto& [from, to] = edges_[e];
    if (from < 0 || from >= num_vertices_ || to < 0 || to >= num_vertices_)
      throw InputError("level: edge endpoint out of range");
    out_[from].push_back(e);
    in_[to].push_back(e);
  }
  for (int v : sources_) {
    if (v < 0 || v >= num_vertices_) throw InputError("level: source out of range");
    source_mark_[v] = 1;
  }
  for (std::size_t i = 0; i < sinks_.size(); ++i) {
    const int v = sinks_[i].vertex;
    if (v < 0 || v >= num_vertices_) throw InputError("level: sink out of range");
    if (source_mark_[v]) throw InputError("level: vertex is both source and sink");
    sink_mark_[v] = 1;
    sink_pos_[v] = static_cast<int>(i);
  }
  for (int v : sources_) {
    if (out_[v].size() > 1)
      throw InputError("level: source with more than one outgoing edge");
    if (!in_[v].empty()) throw InputError("level: source with incoming edges");
  }
  for (const Sink& s : sinks_) {
    if (!out_[s.vertex].empty())
      throw InputError("level: sink with outgoing edges");
  }
}

std::optional<int> Level::source_out_edge(int v) const {
  if (!source_mark_[v] || out_[v].empty()) return std::nullopt;
  return out_[v].front();
}

double Level::sink_value(int sink_pos, const std::vector<int>& incident_edges) const {
  const Sink& s = sinks_[sink_pos];
  const std::vector<int>& delta = in_[s.vertex];
  Bundle local;
  for (int e : incident_edges) {
    auto it = std::lower_bound(delta.begin(), delta.end(), e);
    if (it == delta.end() || *it != e)
      throw InputError("sink_value: edge not incident to sink");
    local.push_back(static_cast<int>(it - delta.begin()));
  }
  return s.valuation.evaluate(make_bundle(std::move(local)));
}

AugInstance::AugInstance(std::vector<Level> levels,
                         std::vector<std::vector<LinkingEdge>> links)
    : levels_(std::move(levels)), links_(std::move(links)) {
  if (levels_.empty()) throw InputError("augmentation instance needs h >= 1");
  if (links_.size() + 1 != levels_.size())
    throw InputError("augmentation instance: need h-1 linking sets");
  for (std::size_t i = 0; i < links_.size(); ++i) {
    std::set<int> uppers, lowers;
    for (const auto& [up, down] : links_[i]) {
      if (!levels_[i + 1].is_sink(up))
        throw InputError("linking edge upper endpoint is not a sink of level i+1");
      if (!levels_[i].is_source(down))
        throw InputError("linking edge lower endpoint is not a source of level i");
      if (!uppers.insert(up).second || !lowers.insert(down).second)
        throw InputError("linking edges must form a matching");
    }
  }
}

int AugInstance::total_vertices() const {
  int n = 0;
  for (const Level& l : levels_) n += l.num_vertices();
  return n;
}

std::optional<int> AugInstance::linked_sink(int i, int source_vertex) const {
  for (const auto& [up, down] : links_[i])
    if (down == source_vertex) return up;
  return std::nullopt;
}

std::vector<int> AugInstance::linked_sinks(int i,
                                           const std::vector<int>& sources) const {
  std::vector<int> out;
  for (int s : sources)
    if (auto up = linked_sink(i, s)) out.push_back(*up);
  std::sort(out.begin(), out.end());
  return out;
}

int AugInstance::suffix_edge_count(int i) const {
  int n = 0;
  for (int j = i; j < num_levels(); ++j) n += levels_[j].num_edges();
  return n;
}

int AugInstance::suffix_offset(int i, int j) const {
  int off = 0;
  for (int k = i; k < j; ++k) off += levels_[k].num_edges();
  return off;
}

std::vector<int> used_sources(const Level& level, const IntFlow& flow) {
  std::vector<int> out;
  for (int v : level.sources()) {
    auto e = level.source_out_edge(v);
    if (e && flow[*e] > 0) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> covered_edges(const Level& level, int sink_vertex,
                               const IntFlow& flow) {
  std::vector<int> out;
  for (int e : level.in_edges(sink_vertex))
    if (flow[e] > 0) out.push_back(e);
  return out;
}

namespace {

FeasibilityReport violation(std::string reason, int level, int location) {
  FeasibilityReport r;
  r.ok = false;
  r.reason = std::move(reason);
  r.level = level;
  r.location = location;
  return r;
}

FeasibilityReport check_sink_coverage(const Level& level, const IntFlow& flow,
                                      int sink_vertex, double alpha, double tol,
                                      int level_index) {
  if (!level.is_sink(sink_vertex))
    return violation("required coverage at a non-sink vertex", level_index,
                     sink_vertex);
  if (level.in_edges(sink_vertex).empty()) return {};  // degenerate: covered
  const int pos = level.sink_position(sink_vertex);
  const double got = level.sink_value(pos, covered_edges(level, sink_vertex, flow));
  if (got < 1.0 / alpha - tol)
    return violation("sink not 1/alpha-covered", level_index, sink_vertex);
  return {};
}

}  // namespace

FeasibilityReport check_feasible(const AugInstance& instance,
                                 const AugSolution& solution,
                                 const std::vector<int>& target_sinks,
                                 double alpha, std::int64_t beta, double tol) {
  const int h = instance.num_levels();
  if (static_cast<int>(solution.flows.size()) != h)
    return violation("solution level count mismatch", -1, -1);

  for (int i = 0; i < h; ++i) {
    const Level& level = instance.level(i);
    const IntFlow& g = solution.flows[i];
    if (static_cast<int>(g.size()) != level.num_edges())
      return violation("flow vector size mismatch", i, -1);
    for (int e = 0; e < level.num_edges(); ++e) {
      if (g[e] < 0) return violation("negative flow", i, e);
      if (g[e] > beta) return violation("congestion above beta", i, e);
    }
    for (int v = 0; v < level.num_vertices(); ++v) {
      if (level.is_source(v) || level.is_sink(v)) continue;
      std::int64_t balance = 0;
      for (int e : level.in_edges(v)) balance += g[e];
      for (int e : level.out_edges(v)) balance -= g[e];
      if (balance != 0) return violation("flow conservation violated", i, v);
    }
  }

  for (int v : target_sinks) {
    if (auto r = check_sink_coverage(instance.level(0), solution.flows[0], v,
                                     alpha, tol, 0);
        !r)
      return r;
  }
  for (int i = 0; i + 1 < h; ++i) {
    const std::vector<int> used = used_sources(instance.level(i), solution.flows[i]);
    for (int v : instance.linked_sinks(i, used)) {
      if (auto r = check_sink_coverage(instance.level(i + 1), solution.flows[i + 1],
                                       v, alpha, tol, i + 1);
          !r)
        return r;
    }
  }
  return {};
}

std::string aug_instance_to_json(const AugInstance& instance) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["levels"] = nlohmann::json::array();
  for (int i = 0; i < instance.num_levels(); ++i) {
    const Level& l = instance.level(i);
    nlohmann::json lj;
    lj["num_vertices"] = l.num_vertices();
    lj["edges"] = nlohmann::json::array();
    for (const auto& e : l.edges()) lj["edges"].push_back({e.from, e.to});
    lj["sources"] = l.sources();
    nlohmann::json sinks = nlohmann::json::array();
    for (const auto& s : l.sinks()) sinks.push_back(s.vertex);
    lj["sinks"] = sinks;
    j["levels"].push_back(lj);
  }
  j["links"] = nlohmann::json::array();
  for (int i = 0; i + 1 < instance.num_levels(); ++i) {
    nlohmann::json li = nlohmann::json::array();
    for (const auto& [up, down] : instance.links(i)) li.push_back({up, down});
    j["links"].push_back(li);
  }
  return j.dump(2) + "\n";
}

}  // namespace santa
