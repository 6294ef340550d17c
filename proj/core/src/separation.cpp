#include "santa/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "santa/ellipsoid.hpp"
#include "santa/rng.hpp"
#include "santa/simplex.hpp"

namespace santa {

namespace {

constexpr double kTiny = 1e-9;

struct StatusEscape {
  std::string message;
};

// Scales entry weights and the budget; used to form convex combinations of
// witnesses along the continuous-greedy trajectory.
std::shared_ptr<DwWitness> scale_witness(const DwWitness& w, double factor) {
  auto out = std::make_shared<DwWitness>(w);
  out->budget *= factor;
  for (auto& e : out->entries) e.weight *= factor;
  return out;
}

}  // namespace

struct SeparationDriver::SinkContext {
  int sink_vertex = -1;
  std::vector<int> delta;            // in-edge ids in id order
  ValuationOracle truncated;         // min(1, f) over local positions
  std::unique_ptr<SubsetTable> table;
  std::vector<double> singletons;    // truncated singleton per local position
  std::vector<int> large_positions;  // f'({e}) > 1/alpha
  std::vector<int> banned_edges;     // the large edges, removed after the shortcut
  std::vector<int> ground_positions; // positions fed to continuous greedy
};

SeparationDriver::SeparationDriver(const AugInstance& instance, int level,
                                   std::vector<int> sinks, Params params,
                                   const SolveConfig& config, MembershipFn recurse,
                                   std::uint64_t seed)
    : instance_(instance),
      level_(level),
      sinks_(std::move(sinks)),
      params_(params),
      config_(config),
      recurse_(std::move(recurse)),
      seed_(seed) {
  const Level& lv = instance_.level(level_);
  if (level_ + 1 < instance_.num_levels()) {
    for (int s : lv.sources()) {
      if (!lv.source_out_edge(s).has_value()) continue;
      if (instance_.linked_sink(level_, s).has_value()) linked_sources_.push_back(s);
    }
  }
}

SeparationDriver::~SeparationDriver() = default;

SepOutcome SeparationDriver::separate(const DualPoint& dual) {
  try {
    for (int v : sinks_) {
      SepOutcome out = try_sink(v, dual);
      if (out.kind != SepOutcome::Kind::NoViolation) return out;
    }
  } catch (const StatusEscape& st) {
    SepOutcome out;
    out.kind = SepOutcome::Kind::Status;
    out.status = st.message;
    return out;
  }
  SepOutcome ok;
  ok.kind = SepOutcome::Kind::NoViolation;
  return ok;
}

void SeparationDriver::verify_column(const DualPoint& dual,
                                     const DwColumn& column) const {
  const Level& lv = instance_.level(level_);
  if (dual_violation_value(instance_, level_, dual, column) >= -kTiny)
    throw ContractError("separation: column does not violate the dual constraint");
  const double cov = lv.sink_value(lv.sink_position(column.sink_vertex),
                                   covered_edges(lv, column.sink_vertex, column.flow));
  if (cov < 1.0 / params_.alpha - kTiny)
    throw ContractError("separation: column coverage below 1/alpha");
  for (std::int64_t f : column.flow)
    if (f < 0 || f > params_.beta)
      throw ContractError("separation: column congestion outside [0, beta]");
  for (int k = 0; k < column.d.size(); ++k)
    if (column.d[k] < -kTiny || column.d[k] > static_cast<double>(params_.beta) + kTiny)
      throw ContractError("separation: column budget outside [0, beta]");
}

SepOutcome SeparationDriver::try_sink(int target_sink, const DualPoint& dual) {
  SepOutcome none;
  none.kind = SepOutcome::Kind::NoViolation;

  const double pi_u = dual.pi_of(target_sink);
  if (pi_u <= kTiny) return none;  // lhs >= 0 can never undercut pi

  const Level& lv = instance_.level(level_);
  auto& ctx_ptr = sink_ctx_[target_sink];
  if (!ctx_ptr) {
    ctx_ptr = std::make_unique<SinkContext>();
    SinkContext& ctx = *ctx_ptr;
    ctx.sink_vertex = target_sink;
    ctx.delta = lv.in_edges(target_sink);
    if (ctx.delta.size() > 20)
      throw CapabilityError("separation: sink degree above 20");
    const Sink& sink = lv.sinks()[lv.sink_position(target_sink)];
    ctx.truncated = ValuationOracle(
        ValuationKind::Derived,
        std::make_shared<CappedValuation>(sink.valuation.function(), 1.0));
    std::vector<int> ground(ctx.delta.size());
    for (std::size_t i = 0; i < ground.size(); ++i) ground[i] = static_cast<int>(i);
    ctx.table = std::make_unique<SubsetTable>(ctx.truncated, ground);
    for (std::size_t i = 0; i < ctx.delta.size(); ++i) {
      ctx.singletons.push_back(ctx.table->value(1u << i));
      if (ctx.singletons.back() > 1.0 / params_.alpha + kTiny) {
        ctx.large_positions.push_back(static_cast<int>(i));
        ctx.banned_edges.push_back(ctx.delta[i]);
      } else if (ctx.singletons.back() > kTiny) {
        ctx.ground_positions.push_back(static_cast<int>(i));
      }
    }
  }
  SinkContext& ctx = *ctx_ptr;

  if (!ctx.large_positions.empty()) {
    if (auto col = large_singleton_shortcut(ctx, dual)) {
      verify_column(dual, *col);
      SepOutcome out;
      out.kind = SepOutcome::Kind::Violation;
      out.column = std::move(*col);
      return out;
    }
  }
  if (ctx.ground_positions.empty()) return none;

  // Continuous greedy over the truncated objective, LINSEP as the linear
  // maximization oracle. The full fractional solutions are accumulated so the
  // rounding below sees the convex combination, not just the projection.
  const int n_ground = static_cast<int>(ctx.ground_positions.size());
  const int n_vertices = instance_.total_vertices();
  std::vector<double> g_sum(lv.num_edges(), 0.0);
  std::map<int, Eigen::VectorXd> d_sum;
  // Per source: (y_s of the step, witness of that step). The final witness is
  // the y-weighted convex combination, matching d_final / y_final exactly.
  std::map<int, std::vector<std::pair<double, std::shared_ptr<const DwWitness>>>>
      witness_steps;
  int oracle_calls = 0;

  std::vector<int> ground_resources;  // positions into delta for cgreedy's f
  for (int pos : ctx.ground_positions) ground_resources.push_back(pos);

  LinearMaxOracle oracle = [&](const std::vector<double>& w)
      -> std::optional<std::vector<double>> {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(lv.num_edges());
    for (int j = 0; j < n_ground; ++j)
      c[ctx.delta[ctx.ground_positions[j]]] = w[j];
    FractionalSep sol = solve_linsep(target_sink, dual, c, ctx.banned_edges);
    ++oracle_calls;
    for (int e = 0; e < lv.num_edges(); ++e) g_sum[e] += sol.g[e];
    for (const auto& [s, ds] : sol.d) {
      auto [it, fresh] = d_sum.emplace(s, ds);
      if (!fresh) it->second += ds;
    }
    for (const auto& [s, wit] : sol.d_witness) {
      if (!wit) continue;
      const auto oe = lv.source_out_edge(s);
      const double ys = oe ? sol.g[*oe] : 0.0;
      if (ys > kTiny) witness_steps[s].push_back({ys, wit});
    }
    std::vector<double> proj(n_ground);
    for (int j = 0; j < n_ground; ++j)
      proj[j] = sol.g[ctx.delta[ctx.ground_positions[j]]];
    return proj;
  };

  CgreedyOptions copt;
  copt.delta = config_.cgreedy_delta(n_vertices);
  copt.samples = config_.cgreedy_samples(n_vertices);
  copt.seed = stream_seed(seed_, 0x75737461ULL, static_cast<std::uint64_t>(target_sink));

  CgreedyResult greedy;
  try {
    greedy = continuous_greedy(ctx.truncated, ground_resources, oracle, copt);
  } catch (const StatusEscape& st) {
    SepOutcome out;
    out.kind = SepOutcome::Kind::Status;
    out.status = st.message;
    return out;
  }
  if (greedy.p_empty || oracle_calls == 0) return none;

  const double step_weight = 1.0 / oracle_calls;
  FractionalSep fractional;
  fractional.g.assign(lv.num_edges(), 0.0);
  for (int e = 0; e < lv.num_edges(); ++e)
    fractional.g[e] = std::clamp(g_sum[e] * step_weight, 0.0, 1.0);
  for (auto& [s, ds] : d_sum) {
    Eigen::VectorXd d = ds * step_weight;
    for (int k = 0; k < d.size(); ++k) d[k] = std::max(0.0, d[k]);
    fractional.d[s] = std::move(d);
  }
  for (auto& [s, steps] : witness_steps) {
    double y_total = 0.0;
    for (const auto& [ys, wit] : steps) y_total += ys;
    if (y_total <= kTiny) continue;
    std::shared_ptr<const DwWitness> acc;
    for (const auto& [ys, wit] : steps) {
      auto scaled = scale_witness(*wit, ys / y_total);
      acc = acc ? merge_witnesses(*acc, *scaled)
                : std::shared_ptr<const DwWitness>(std::move(scaled));
    }
    fractional.d_witness[s] = acc;
  }

  // Fractional value gate: only round when the relaxation reached the
  // continuous-greedy guarantee, otherwise there is no (1,1) violation here.
  std::vector<double> x(ctx.delta.size(), 0.0);
  for (std::size_t i = 0; i < ctx.delta.size(); ++i)
    x[i] = fractional.g[ctx.delta[i]];
  double value;
  if (ctx.table->size() <= 16) {
    value = multilinear_exact(*ctx.table, x);
  } else {
    value = multilinear_estimate(*ctx.table, x, config_.cgreedy.samples,
                                 stream_seed(seed_, 0x46657374ULL,
                                             static_cast<std::uint64_t>(target_sink)));
  }
  const double gate = 1.0 - 1.0 / std::exp(1.0) - config_.sep.epsilon;
  if (value < gate) return none;

  const int cap = config_.separation_attempt_cap(n_vertices);
  if (auto col = round_separation(target_sink, dual, fractional, ctx.banned_edges, cap)) {
    verify_column(dual, *col);
    SepOutcome out;
    out.kind = SepOutcome::Kind::Violation;
    out.column = std::move(*col);
    return out;
  }
  return none;
}

std::optional<std::pair<Eigen::VectorXd, std::shared_ptr<const DwWitness>>>
SeparationDriver::cheapest_budget(int source_vertex, const DualPoint& dual) {
  const Level& lv = instance_.level(level_);
  const int here = lv.num_edges();
  const int m2 = instance_.suffix_edge_count(level_ + 1);
  const auto linked = instance_.linked_sink(level_, source_vertex);
  if (!linked.has_value())
    return std::make_pair(Eigen::VectorXd::Zero(0), nullptr);
  const std::vector<int> next_sinks{*linked};

  Eigen::VectorXd mu_next(m2);
  for (int k = 0; k < m2; ++k) mu_next[k] = std::max(0.0, dual.mu[here + k]);

  // Accepted points are logged with their witnesses: pooled cuts may reject a
  // previously accepted point on replay, so the log is the source of truth.
  std::vector<std::pair<Eigen::VectorXd, std::shared_ptr<const DwWitness>>> accepts;
  auto& pool = cut_pool_[source_vertex];
  SeparationCallback oracle = [&](const Eigen::VectorXd& d) -> SeparationResponse {
    for (int k = 0; k < m2; ++k) {
      if (d[k] < -kTiny) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m2);
        w[k] = -1.0;
        return SeparationResponse::separate(std::move(w), 0.0);
      }
      if (d[k] > static_cast<double>(params_.beta) + kTiny) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m2);
        w[k] = 1.0;
        return SeparationResponse::separate(std::move(w),
                                            static_cast<double>(params_.beta));
      }
    }
    for (const auto& [w, rhs] : pool)
      if (w.dot(d) < rhs - kTiny) return SeparationResponse::separate(-w, -rhs);
    MembershipResult res = recurse_(next_sinks, d);
    if (res.kind == MembershipResult::Kind::Accepted) {
      accepts.push_back({d, res.witness});
      return SeparationResponse::accept();
    }
    if (res.kind == MembershipResult::Kind::Refuted) {
      pool.push_back({res.certificate->w, res.certificate->rhs});
      return SeparationResponse::separate(-res.certificate->w, -res.certificate->rhs);
    }
    throw StatusEscape{res.status};
  };

  EllipsoidOptions opts;
  opts.outer_radius = static_cast<double>(params_.beta) * std::sqrt(m2) + 1.0;
  opts.inner_radius = config_.ellipsoid.inner_radius;
  opts.hard_cap = std::min<long>(config_.ellipsoid.linsep_hard_cap, 300);
  Eigen::VectorXd objective = -mu_next;

  // A suboptimal d only weakens the shortcut, so a coarse search suffices.
  MaximizeResult best = maximize_with_binary_search(
      m2, opts, objective, oracle, std::max(config_.ellipsoid.eps_bs, 0.05));
  if (!best.found || accepts.empty()) return std::nullopt;
  std::size_t pick = 0;
  double pick_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < accepts.size(); ++i) {
    const double dist = (accepts[i].first - best.point).norm();
    if (dist < pick_dist) {
      pick_dist = dist;
      pick = i;
    }
  }
  Eigen::VectorXd d = accepts[pick].first;
  for (int k = 0; k < m2; ++k) d[k] = std::max(0.0, d[k]);
  return std::make_pair(std::move(d), accepts[pick].second);
}

std::optional<DwColumn> SeparationDriver::large_singleton_shortcut(
    SinkContext& ctx, const DualPoint& dual) {
  const Level& lv = instance_.level(level_);
  const double pi_u = dual.pi_of(ctx.sink_vertex);

  // Dijkstra distances from every source over mu weights, with parents.
  auto shortest_from = [&](int source) {
    std::vector<double> dist(lv.num_vertices(),
                             std::numeric_limits<double>::infinity());
    std::vector<int> parent_edge(lv.num_vertices(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v] + kTiny) continue;
      for (int e : lv.out_edges(v)) {
        const double w = std::max(0.0, dual.mu[e]);
        if (dist[v] + w < dist[lv.edge(e).to] - 1e-15) {
          dist[lv.edge(e).to] = dist[v] + w;
          parent_edge[lv.edge(e).to] = e;
          heap.push({dist[lv.edge(e).to], lv.edge(e).to});
        }
      }
    }
    return std::make_pair(std::move(dist), std::move(parent_edge));
  };

  struct Candidate {
    double cost = std::numeric_limits<double>::infinity();
    IntFlow flow;
    Eigen::VectorXd d;
    std::shared_ptr<const DwWitness> witness;
  };
  Candidate best;

  for (int s : lv.sources()) {
    if (!lv.source_out_edge(s).has_value()) continue;
    auto [dist, parent] = shortest_from(s);

    double d_cost = 0.0;
    Eigen::VectorXd d_vec = Eigen::VectorXd::Zero(0);
    std::shared_ptr<const DwWitness> d_witness;
    if (instance_.num_levels() > level_ + 1 &&
        instance_.linked_sink(level_, s).has_value()) {
      auto got = cheapest_budget(s, dual);
      if (!got.has_value()) continue;  // no feasible next-level budget at all
      d_vec = got->first;
      d_witness = got->second;
      const int here = lv.num_edges();
      for (int k = 0; k < d_vec.size(); ++k)
        d_cost += d_vec[k] * std::max(0.0, dual.mu[here + k]);
    }

    for (int pos : ctx.large_positions) {
      const int e = ctx.delta[pos];
      const int tail = lv.edge(e).from;
      if (!std::isfinite(dist[tail])) continue;
      const double cost = dist[tail] + std::max(0.0, dual.mu[e]) + d_cost;
      if (cost >= pi_u - kTiny || cost >= best.cost) continue;
      // Reconstruct the path and reject it if it walks through the large edge
      // twice (cannot happen on simple shortest paths, checked anyway).
      IntFlow flow(lv.num_edges(), 0);
      flow[e] += 1;
      int cur = tail;
      bool ok = true;
      while (cur != s) {
        const int pe = parent[cur];
        if (pe < 0 || flow[pe] > 0) {
          ok = false;
          break;
        }
        flow[pe] += 1;
        cur = lv.edge(pe).from;
      }
      if (!ok) continue;
      best.cost = cost;
      best.flow = std::move(flow);
      best.d = d_vec;
      best.witness = d_witness;
    }
  }

  if (!std::isfinite(best.cost)) return std::nullopt;
  DwColumn col;
  col.sink_vertex = ctx.sink_vertex;
  col.flow = std::move(best.flow);
  col.d = std::move(best.d);
  col.d_witness = std::move(best.witness);
  col.coverage = lv.sink_value(lv.sink_position(ctx.sink_vertex),
                               covered_edges(lv, ctx.sink_vertex, col.flow));
  return col;
}

FractionalSep SeparationDriver::solve_linsep(int target_sink, const DualPoint& dual,
                                             const Eigen::VectorXd& objective,
                                             const std::vector<int>& banned_edges) {
  const Level& lv = instance_.level(level_);
  const int m1 = lv.num_edges();
  const double pi_u = dual.pi_of(target_sink);
  std::vector<char> banned(m1, 0);
  for (int e : banned_edges) banned[e] = 1;

  // Fast path: no later-level obligations means LINSEP is an explicit LP; the
  // exact simplex optimum trivially dominates the (1,1) optimum because the
  // two systems coincide.
  if (linked_sources_.empty()) {
    LinearProgram lp(m1);
    for (int e = 0; e < m1; ++e) {
      lp.set_objective(e, rat_from_double(objective[e]));
      LinConstraint ub;
      ub.rel = Rel::Le;
      ub.rhs = banned[e] ? Rat(0) : Rat(1);
      ub.terms.push_back({e, Rat(1)});
      lp.add_constraint(std::move(ub));
    }
    for (int v = 0; v < lv.num_vertices(); ++v) {
      if (lv.is_source(v) || lv.is_sink(v)) continue;
      LinConstraint cons;
      cons.rel = Rel::Eq;
      cons.rhs = Rat(0);
      for (int e : lv.in_edges(v)) cons.terms.push_back({e, Rat(1)});
      for (int e : lv.out_edges(v)) cons.terms.push_back({e, Rat(-1)});
      if (!cons.terms.empty()) lp.add_constraint(std::move(cons));
    }
    {
      LinConstraint cost;
      cost.rel = Rel::Le;
      cost.rhs = rat_from_double(pi_u);
      for (int e = 0; e < m1; ++e) {
        const double mu = std::max(0.0, dual.mu[e]);
        if (mu > 0) cost.terms.push_back({e, rat_from_double(mu)});
      }
      lp.add_constraint(std::move(cost));
    }
    LpResult sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
      throw ContractError("solve_linsep: explicit LP unsolvable");
    FractionalSep out;
    out.g.assign(m1, 0.0);
    for (int e = 0; e < m1; ++e) out.g[e] = to_double(sol.x[e]);
    out.objective = to_double(sol.value);
    return out;
  }

  // Ellipsoid route with the conservation equalities eliminated through an
  // orthonormal kernel basis.
  const int k_src = static_cast<int>(linked_sources_.size());
  const int m2 = instance_.suffix_edge_count(level_ + 1);
  const int m = m1 + k_src * m2;

  std::vector<std::vector<int>> interior_in, interior_out;
  Eigen::MatrixXd C;
  {
    std::vector<int> interior;
    for (int v = 0; v < lv.num_vertices(); ++v)
      if (!lv.is_source(v) && !lv.is_sink(v) &&
          (!lv.in_edges(v).empty() || !lv.out_edges(v).empty()))
        interior.push_back(v);
    C = Eigen::MatrixXd::Zero(static_cast<int>(interior.size()), m);
    for (std::size_t r = 0; r < interior.size(); ++r) {
      for (int e : lv.in_edges(interior[r])) C(static_cast<int>(r), e) = 1.0;
      for (int e : lv.out_edges(interior[r])) C(static_cast<int>(r), e) = -1.0;
    }
  }
  Eigen::MatrixXd kernel;
  if (C.rows() == 0) {
    kernel = Eigen::MatrixXd::Identity(m, m);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    Eigen::MatrixXd K = lu.kernel();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
    kernel = qr.householderQ() * Eigen::MatrixXd::Identity(m, K.cols());
  }
  const int nz = static_cast<int>(kernel.cols());

  const int d_slot0 = m1;
  auto d_slot = [&](int src_index, int k) { return d_slot0 + src_index * m2 + k; };

  struct Accepted {
    Eigen::VectorXd z;
    std::vector<double> g;
    std::map<int, Eigen::VectorXd> d;
    std::map<int, std::shared_ptr<const DwWitness>> witness;
  };
  // Log of accepted points: pooled (1,1) cuts added by later binary-search
  // rounds may reject an earlier accepted point on replay.
  std::vector<Accepted> accepts;
  std::map<int, std::shared_ptr<const DwWitness>> pending_witness;

  auto cut_x = [&](Eigen::VectorXd w_x, double rhs) {
    return SeparationResponse::separate(kernel.transpose() * w_x, rhs);
  };

  SeparationCallback oracle = [&](const Eigen::VectorXd& z) -> SeparationResponse {
    Eigen::VectorXd x = kernel * z;
    for (int e = 0; e < m1; ++e) {
      const double ub = banned[e] ? 0.0 : 1.0;
      if (x[e] > ub + kTiny) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        w[e] = 1.0;
        return cut_x(std::move(w), ub);
      }
      if (x[e] < -kTiny) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        w[e] = -1.0;
        return cut_x(std::move(w), 0.0);
      }
    }
    for (int si = 0; si < k_src; ++si) {
      for (int k = 0; k < m2; ++k) {
        const double v = x[d_slot(si, k)];
        if (v > 1.0 + kTiny) {
          Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
          w[d_slot(si, k)] = 1.0;
          return cut_x(std::move(w), 1.0);
        }
        if (v < -kTiny) {
          Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
          w[d_slot(si, k)] = -1.0;
          return cut_x(std::move(w), 0.0);
        }
      }
    }
    for (int k = 0; k < m2; ++k) {  // sum_s d_s(e) <= 1
      double total = 0.0;
      for (int si = 0; si < k_src; ++si) total += x[d_slot(si, k)];
      if (total > 1.0 + kTiny) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        for (int si = 0; si < k_src; ++si) w[d_slot(si, k)] = 1.0;
        return cut_x(std::move(w), 1.0);
      }
    }
    {
      double cost = 0.0;
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
      for (int e = 0; e < m1; ++e) {
        const double mu = std::max(0.0, dual.mu[e]);
        cost += mu * x[e];
        w[e] = mu;
      }
      for (int si = 0; si < k_src; ++si)
        for (int k = 0; k < m2; ++k) {
          const double mu = std::max(0.0, dual.mu[m1 + k]);
          cost += mu * x[d_slot(si, k)];
          w[d_slot(si, k)] = mu;
        }
      if (cost > pi_u + kTiny) return cut_x(std::move(w), pi_u);
    }
    // Recursive budget constraints d_s in y_s * B(L({s}), alpha, beta).
    for (int si = 0; si < k_src; ++si) {
      const int s = linked_sources_[si];
      const int out_edge = *lv.source_out_edge(s);
      const double ys = std::max(0.0, x[out_edge]);
      Eigen::VectorXd ds(m2);
      for (int k = 0; k < m2; ++k) ds[k] = std::max(0.0, x[d_slot(si, k)]);
      if (ys <= 1e-7) {
        int hot = -1;
        for (int k = 0; k < m2; ++k)
          if (ds[k] > 1e-6) hot = k;
        if (hot < 0) continue;
        // d_s(e) <= y_s is valid for the (1,1) system.
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        w[d_slot(si, hot)] = 1.0;
        w[out_edge] = -1.0;
        return cut_x(std::move(w), 0.0);
      }
      Eigen::VectorXd q = ds / ys;
      bool cut_found = false;
      Eigen::VectorXd pw;
      double prhs = 0.0;
      for (const auto& [cw, crhs] : cut_pool_[s]) {
        if (cw.dot(q) < crhs - 1e-7) {
          pw = cw;
          prhs = crhs;
          cut_found = true;
          break;
        }
      }
      if (!cut_found) {
        const auto linked = instance_.linked_sink(level_, s);
        MembershipResult res = recurse_({*linked}, q);
        if (res.kind == MembershipResult::Kind::Accepted) {
          pending_witness[s] = res.witness;
          continue;
        }
        if (res.kind == MembershipResult::Kind::Status) throw StatusEscape{res.status};
        pw = res.certificate->w;
        prhs = res.certificate->rhs;
        cut_pool_[s].push_back({pw, prhs});
      }
      // w.d_s - rhs*y_s >= 0 holds for every feasible point.
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < m2; ++k) w[d_slot(si, k)] = -pw[k];
      w[out_edge] = prhs;
      return cut_x(std::move(w), 0.0);
    }
    // Feasible: log the full solution for the caller.
    Accepted acc;
    acc.z = z;
    acc.g.assign(m1, 0.0);
    for (int e = 0; e < m1; ++e) acc.g[e] = std::clamp(x[e], 0.0, 1.0);
    for (int si = 0; si < k_src; ++si) {
      Eigen::VectorXd ds(m2);
      for (int k = 0; k < m2; ++k)
        ds[k] = std::clamp(x[d_slot(si, k)], 0.0, 1.0);
      acc.d[linked_sources_[si]] = std::move(ds);
    }
    acc.witness = pending_witness;
    accepts.push_back(std::move(acc));
    return SeparationResponse::accept();
  };

  Eigen::VectorXd c_x = Eigen::VectorXd::Zero(m);
  for (int e = 0; e < m1; ++e) c_x[e] = objective[e];

  EllipsoidOptions opts;
  opts.outer_radius = std::sqrt(static_cast<double>(m)) + 1.0;
  opts.inner_radius = config_.ellipsoid.inner_radius;
  opts.hard_cap = config_.ellipsoid.linsep_hard_cap;

  MaximizeResult best = maximize_with_binary_search(
      nz, opts, kernel.transpose() * c_x, oracle, config_.ellipsoid.eps_bs);
  if (!best.found || accepts.empty())
    throw ContractError("solve_linsep: the zero solution was not found feasible");
  std::size_t pick = 0;
  double pick_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < accepts.size(); ++i) {
    const double dist = (accepts[i].z - best.point).norm();
    if (dist < pick_dist) {
      pick_dist = dist;
      pick = i;
    }
  }
  const Accepted& chosen = accepts[pick];

  FractionalSep out;
  out.g = chosen.g;
  for (const auto& [s, ds] : chosen.d) out.d[s] = ds;
  for (const auto& [s, wsh] : chosen.witness) out.d_witness[s] = wsh;
  out.objective = 0.0;
  for (int e = 0; e < m1; ++e) out.objective += objective[e] * out.g[e];
  return out;
}

std::optional<DwColumn> SeparationDriver::round_separation(
    int target_sink, const DualPoint& dual, const FractionalSep& fractional,
    const std::vector<int>& banned_edges, int attempt_cap) {
  (void)banned_edges;
  const Level& lv = instance_.level(level_);
  const int m1 = lv.num_edges();
  const double pi_u = dual.pi_of(target_sink);
  if (pi_u <= kTiny) return std::nullopt;

  // Path family grouped by the last edge into the sink. Exact rational
  // decomposition when the flow conserves exactly; otherwise a tolerant
  // peeling that under-approximates the flow (sound: sampling probabilities
  // only shrink, and the output column is verified independently).
  struct SampledPath {
    std::vector<int> edges;
    double prob = 0.0;
    int source = -1;
  };
  std::map<int, std::vector<SampledPath>> family;  // last edge -> paths

  RatFlow exact = to_rational(fractional.g);
  if (conserves(lv, exact)) {
    PathDecomposition dec = decompose_flow(lv, std::move(exact));
    for (const FlowPath& p : dec.paths) {
      const int last_edge = p.edges.back();
      if (lv.edge(last_edge).to != target_sink) continue;
      family[last_edge].push_back(
          {p.edges, to_double(p.weight), lv.edge(p.edges.front()).from});
    }
  } else {
    std::vector<double> remaining = fractional.g;
    for (int e : lv.in_edges(target_sink)) {
      while (remaining[e] > 1e-7) {
        std::vector<int> rev{e};
        double bottleneck = remaining[e];
        int cur = lv.edge(e).from;
        bool reached_source = lv.is_source(cur);
        while (!reached_source) {
          int pick = -1;
          for (int in : lv.in_edges(cur))
            if (remaining[in] > 1e-7 && (pick < 0 || remaining[in] > remaining[pick]))
              pick = in;
          if (pick < 0) break;
          rev.push_back(pick);
          bottleneck = std::min(bottleneck, remaining[pick]);
          cur = lv.edge(pick).from;
          reached_source = lv.is_source(cur);
        }
        for (int used : rev) remaining[used] -= bottleneck;
        if (!reached_source) continue;  // dropped imbalanced mass
        std::vector<int> edges(rev.rbegin(), rev.rend());
        family[e].push_back({std::move(edges), bottleneck, cur});
      }
    }
  }
  if (family.empty()) return std::nullopt;

  const int here = m1;
  const bool has_next = level_ + 1 < instance_.num_levels();
  const int m2 = has_next ? instance_.suffix_edge_count(level_ + 1) : 0;

  // Phi(P): mu along the path plus the source's normalized next-level cost.
  auto ys_of = [&](int s) {
    auto oe = lv.source_out_edge(s);
    return oe ? std::max(fractional.g[*oe], 1e-12) : 1e-12;
  };
  auto d_over_y = [&](int s) -> Eigen::VectorXd {
    auto it = fractional.d.find(s);
    if (!has_next || it == fractional.d.end()) return Eigen::VectorXd::Zero(0);
    Eigen::VectorXd q = it->second / ys_of(s);
    for (int k = 0; k < q.size(); ++k)
      q[k] = std::clamp(q[k], 0.0, static_cast<double>(params_.beta));
    return q;
  };
  auto phi_of = [&](const SampledPath& p) {
    double phi = 0.0;
    for (int e : p.edges) phi += std::max(0.0, dual.mu[e]);
    const Eigen::VectorXd q = d_over_y(p.source);
    for (int k = 0; k < q.size(); ++k) phi += q[k] * std::max(0.0, dual.mu[here + k]);
    return phi;
  };

  for (int attempt = 0; attempt < attempt_cap; ++attempt) {
    auto rng = make_rng(seed_, 0x726f756eULL, static_cast<std::uint64_t>(target_sink),
                        attempt_counter_++);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<const SampledPath*> picked;
    for (const auto& [e, paths] : family) {
      double u = unif(rng);
      for (const SampledPath& p : paths) {
        if (u < p.prob) {
          picked.push_back(&p);
          break;
        }
        u -= p.prob;
      }
    }
    if (picked.empty()) continue;

    double phi_total = 0.0;
    std::vector<double> phis;
    for (const auto* p : picked) {
      phis.push_back(phi_of(*p));
      phi_total += phis.back();
    }
    const long k_bound =
        std::max<long>(1, static_cast<long>(std::ceil(phi_total / pi_u)));

    // Greedy partition: fill a group while its normalized Phi stays below 1;
    // the path that would overflow it goes to the discard pile and the next
    // group starts fresh.
    std::vector<std::vector<int>> groups;
    std::vector<int> discard;
    std::vector<int> current;
    double current_phi = 0.0;
    for (std::size_t i = 0; i < picked.size(); ++i) {
      const double phin = phis[i] / pi_u;
      if (current_phi + phin < 1.0) {
        current.push_back(static_cast<int>(i));
        current_phi += phin;
      } else {
        discard.push_back(static_cast<int>(i));
        if (!current.empty()) groups.push_back(current);
        current.clear();
        current_phi = 0.0;
      }
    }
    if (!current.empty()) groups.push_back(current);
    // Structural guarantees of the partition: each closed group plus its
    // overflow path packs a normalized Phi of at least 1.
    if (static_cast<long>(discard.size()) > k_bound ||
        static_cast<long>(groups.size()) > k_bound + 1)
      throw ContractError("round_separation: partition bounds violated");
    if (groups.empty()) continue;

    // Best group by (untruncated) sink value.
    double best_value = -1.0;
    int best_group = -1;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      std::vector<int> last_edges;
      for (int i : groups[gi]) last_edges.push_back(picked[i]->edges.back());
      const double v = lv.sink_value(lv.sink_position(target_sink), last_edges);
      if (v > best_value) {
        best_value = v;
        best_group = static_cast<int>(gi);
      }
    }
    if (best_group < 0 || best_value < 1.0 / params_.alpha - 1e-12) continue;

    DwColumn col;
    col.sink_vertex = target_sink;
    col.flow.assign(m1, 0);
    std::set<int> used_sources_set;
    for (int i : groups[best_group]) {
      for (int e : picked[i]->edges) col.flow[e] += 1;
      used_sources_set.insert(picked[i]->source);
    }
    bool congested = false;
    for (std::int64_t f : col.flow)
      if (f > params_.beta) congested = true;
    if (congested) continue;

    std::shared_ptr<const DwWitness> merged;
    if (has_next) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(m2);
      bool budget_ok = true;
      for (int s : used_sources_set) {
        const Eigen::VectorXd q = d_over_y(s);
        if (q.size() > 0) d += q;
        auto wit = fractional.d_witness.find(s);
        if (instance_.linked_sink(level_, s).has_value() &&
            !instance_.level(level_ + 1)
                 .in_edges(*instance_.linked_sink(level_, s))
                 .empty()) {
          if (wit == fractional.d_witness.end() || !wit->second) {
            budget_ok = false;
            break;
          }
          merged = merged ? merge_witnesses(*merged, *wit->second)
                          : std::shared_ptr<const DwWitness>(
                                std::make_shared<DwWitness>(*wit->second));
        }
      }
      if (!budget_ok) continue;
      for (int k = 0; k < m2; ++k)
        if (d[k] > static_cast<double>(params_.beta) + kTiny) budget_ok = false;
      if (!budget_ok) continue;
      col.d = std::move(d);
    }
    col.d_witness = merged;

    double cost = 0.0;
    for (int e = 0; e < m1; ++e)
      cost += static_cast<double>(col.flow[e]) * std::max(0.0, dual.mu[e]);
    for (int k = 0; k < col.d.size(); ++k)
      cost += col.d[k] * std::max(0.0, dual.mu[here + k]);
    if (cost >= pi_u - 1e-9) continue;

    col.coverage = best_value;
    return col;
  }
  return std::nullopt;
}

}  // namespace santa
