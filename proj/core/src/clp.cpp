#include "santa/clp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "santa/rng.hpp"

#include "santa/ellipsoid.hpp"
#include "santa/separation.hpp"
#include "santa/simplex.hpp"

namespace santa {

double dual_violation_value(const AugInstance& instance, int level,
                            const DualPoint& dual, const DwColumn& column) {
  const Level& lv = instance.level(level);
  if (static_cast<int>(column.flow.size()) != lv.num_edges())
    throw InputError("dual_violation_value: column flow size mismatch");
  const int here = lv.num_edges();
  double lhs = 0.0;
  for (int e = 0; e < here; ++e) lhs += static_cast<double>(column.flow[e]) * dual.mu[e];
  for (int k = 0; k < column.d.size(); ++k) lhs += column.d[k] * dual.mu[here + k];
  return lhs - dual.pi_of(column.sink_vertex);
}

namespace {

FeasibilityReport fail(std::string reason, int level, int location) {
  FeasibilityReport r;
  r.ok = false;
  r.reason = std::move(reason);
  r.level = level;
  r.location = location;
  return r;
}

FeasibilityReport check_column(const AugInstance& instance, int level,
                               const DwColumn& col, double alpha,
                               std::int64_t beta, double tol) {
  const Level& lv = instance.level(level);
  if (static_cast<int>(col.flow.size()) != lv.num_edges())
    return fail("column flow size mismatch", level, -1);
  for (int e = 0; e < lv.num_edges(); ++e) {
    if (col.flow[e] < 0) return fail("column: negative flow", level, e);
    if (col.flow[e] > beta) return fail("column: congestion above beta", level, e);
  }
  for (int v = 0; v < lv.num_vertices(); ++v) {
    if (lv.is_source(v) || lv.is_sink(v)) continue;
    std::int64_t bal = 0;
    for (int e : lv.in_edges(v)) bal += col.flow[e];
    for (int e : lv.out_edges(v)) bal -= col.flow[e];
    if (bal != 0) return fail("column: conservation violated", level, v);
  }
  for (const Sink& s : lv.sinks()) {
    if (s.vertex == col.sink_vertex) continue;
    for (int e : lv.in_edges(s.vertex))
      if (col.flow[e] > 0) return fail("column: flow into a foreign sink", level, s.vertex);
  }
  if (!lv.is_sink(col.sink_vertex)) return fail("column: not a sink", level, col.sink_vertex);
  const double cov = lv.sink_value(lv.sink_position(col.sink_vertex),
                                   covered_edges(lv, col.sink_vertex, col.flow));
  if (cov < 1.0 / alpha - tol)
    return fail("column: coverage below 1/alpha", level, col.sink_vertex);
  return {};
}

}  // namespace

FeasibilityReport audit_witness(const AugInstance& instance, const DwWitness& witness,
                                double alpha, std::int64_t beta, double tol) {
  const int level = witness.level;
  if (level < 0 || level >= instance.num_levels())
    return fail("witness level out of range", level, -1);
  const Level& lv = instance.level(level);
  const int here = lv.num_edges();
  const int suffix = instance.suffix_edge_count(level);
  if (witness.budget.size() != suffix) return fail("witness budget size mismatch", level, -1);

  Eigen::VectorXd usage = Eigen::VectorXd::Zero(suffix);
  std::map<int, double> selected;
  for (const DwEntry& entry : witness.entries) {
    if (entry.weight < -tol) return fail("negative column weight", level, -1);
    if (entry.weight <= 0) continue;
    const DwColumn& col = entry.column;
    if (!std::binary_search(witness.sinks.begin(), witness.sinks.end(),
                            col.sink_vertex) &&
        std::find(witness.sinks.begin(), witness.sinks.end(), col.sink_vertex) ==
            witness.sinks.end())
      return fail("column for a sink outside the witness", level, col.sink_vertex);
    if (auto r = check_column(instance, level, col, alpha, beta, tol); !r) return r;
    selected[col.sink_vertex] += entry.weight;
    for (int e = 0; e < here; ++e)
      usage[e] += entry.weight * static_cast<double>(col.flow[e]);

    const std::vector<int> linked =
        instance.num_levels() > level + 1
            ? instance.linked_sinks(level, used_sources(lv, col.flow))
            : std::vector<int>{};
    if (col.d.size() > 0) {
      if (col.d.size() != suffix - here)
        return fail("column d size mismatch", level, col.sink_vertex);
      for (int k = 0; k < col.d.size(); ++k) {
        if (col.d[k] < -tol) return fail("column d negative", level, k);
        if (col.d[k] > static_cast<double>(beta) + tol)
          return fail("column d above beta", level, k);
        usage[here + k] += entry.weight * col.d[k];
      }
    }
    if (!linked.empty()) {
      if (col.d.size() == 0 && suffix - here > 0)
        return fail("column with obligations but no budget vector", level,
                    col.sink_vertex);
      if (!col.d_witness)
        return fail("column with obligations but no budget witness", level,
                    col.sink_vertex);
      const DwWitness& dw = *col.d_witness;
      if (dw.level != level + 1)
        return fail("budget witness at the wrong level", level, col.sink_vertex);
      for (int u : linked)
        if (!instance.level(level + 1).in_edges(u).empty() &&
            std::find(dw.sinks.begin(), dw.sinks.end(), u) == dw.sinks.end())
          return fail("budget witness misses a linked sink", level + 1, u);
      if (dw.budget.size() != col.d.size())
        return fail("budget witness size mismatch", level + 1, col.sink_vertex);
      for (int k = 0; k < col.d.size(); ++k)
        if (dw.budget[k] > col.d[k] + tol)
          return fail("budget witness exceeds the column budget", level + 1, k);
      if (auto r = audit_witness(instance, dw, alpha, beta, tol); !r) return r;
    }
  }
  for (int v : witness.sinks) {
    auto it = selected.find(v);
    if (it == selected.end() || it->second < 1.0 - tol)
      return fail("sink selection below 1", level, v);
  }
  for (int k = 0; k < suffix; ++k)
    if (usage[k] > witness.budget[k] + tol * std::max(1.0, witness.budget[k]))
      return fail("budget exceeded", level, k);
  return {};
}

SplitResult split_budget(const DwWitness& witness,
                         const std::vector<int>& first_sinks,
                         const std::vector<int>& second_sinks) {
  for (int v : first_sinks)
    if (std::find(second_sinks.begin(), second_sinks.end(), v) != second_sinks.end())
      throw InputError("split_budget: sink sets are not disjoint");

  auto part = std::make_shared<DwWitness>();
  auto rest = std::make_shared<DwWitness>();
  part->level = rest->level = witness.level;
  part->sinks = first_sinks;
  rest->sinks = second_sinks;
  const int suffix = static_cast<int>(witness.budget.size());
  Eigen::VectorXd usage_first = Eigen::VectorXd::Zero(suffix);
  Eigen::VectorXd usage_second = Eigen::VectorXd::Zero(suffix);
  Eigen::VectorXd usage_total = Eigen::VectorXd::Zero(suffix);

  auto usage_of = [&](const DwEntry& e, Eigen::VectorXd& into) {
    const int here = suffix - static_cast<int>(e.column.d.size());
    for (int k = 0; k < here; ++k)
      into[k] += e.weight * static_cast<double>(e.column.flow[k]);
    for (int k = 0; k < e.column.d.size(); ++k)
      into[here + k] += e.weight * e.column.d[k];
  };

  for (const DwEntry& entry : witness.entries) {
    usage_of(entry, usage_total);
    const int v = entry.column.sink_vertex;
    if (std::find(first_sinks.begin(), first_sinks.end(), v) != first_sinks.end()) {
      part->entries.push_back(entry);
      usage_of(entry, usage_first);
    } else if (std::find(second_sinks.begin(), second_sinks.end(), v) !=
               second_sinks.end()) {
      rest->entries.push_back(entry);
      usage_of(entry, usage_second);
    }
  }
  // The slack of constraint (2) is assigned to the first part, so the parts
  // sum exactly to the input budget.
  part->budget = witness.budget - usage_total + usage_first;
  rest->budget = usage_second;
  return {part, rest};
}

std::shared_ptr<const DwWitness> merge_witnesses(const DwWitness& a,
                                                 const DwWitness& b) {
  if (a.level != b.level) throw InputError("merge_witnesses: level mismatch");
  if (a.budget.size() != b.budget.size())
    throw InputError("merge_witnesses: budget size mismatch");
  auto out = std::make_shared<DwWitness>();
  out->level = a.level;
  out->budget = a.budget + b.budget;
  out->sinks = a.sinks;
  for (int v : b.sinks)
    if (std::find(out->sinks.begin(), out->sinks.end(), v) == out->sinks.end())
      out->sinks.push_back(v);
  std::sort(out->sinks.begin(), out->sinks.end());
  out->entries = a.entries;
  out->entries.insert(out->entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

std::shared_ptr<const DwWitness> reconstruct_primal(
    const AugInstance& instance, int level, const std::vector<int>& sinks,
    const Eigen::VectorXd& budget, const std::vector<DwColumn>& columns) {
  const Level& lv = instance.level(level);
  const int here = lv.num_edges();
  const int suffix = instance.suffix_edge_count(level);

  std::vector<int> usable;
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (std::find(sinks.begin(), sinks.end(), columns[j].sink_vertex) != sinks.end())
      usable.push_back(static_cast<int>(j));
  for (int v : sinks) {
    bool any = false;
    for (int j : usable)
      if (columns[j].sink_vertex == v) any = true;
    if (!any) return nullptr;
  }

  LinearProgram lp(static_cast<int>(usable.size()));
  for (int v : sinks) {
    LinConstraint sel;
    sel.rel = Rel::Ge;
    sel.rhs = Rat(1);
    for (std::size_t idx = 0; idx < usable.size(); ++idx)
      if (columns[usable[idx]].sink_vertex == v)
        sel.terms.push_back({static_cast<int>(idx), Rat(1)});
    lp.add_constraint(std::move(sel));
  }
  for (int k = 0; k < suffix; ++k) {
    LinConstraint cap;
    cap.rel = Rel::Le;
    cap.rhs = rat_from_double(budget[k]);
    for (std::size_t idx = 0; idx < usable.size(); ++idx) {
      const DwColumn& col = columns[usable[idx]];
      Rat coeff(0);
      if (k < here)
        coeff = Rat(col.flow[k]);
      else if (k - here < col.d.size())
        coeff = rat_from_double(col.d[k - here]);
      if (coeff != 0) cap.terms.push_back({static_cast<int>(idx), coeff});
    }
    lp.add_constraint(std::move(cap));
  }

  LpResult sol = lp_feasible(lp);
  if (sol.status != LpStatus::Optimal) return nullptr;

  auto witness = std::make_shared<DwWitness>();
  witness->level = level;
  witness->sinks = sinks;
  witness->budget = budget;
  for (std::size_t idx = 0; idx < usable.size(); ++idx) {
    const double y = to_double(sol.x[idx]);
    if (y > 0) witness->entries.push_back({columns[usable[idx]], y});
  }
  return witness;
}

ClpSolver::ClpSolver(const AugInstance& instance, const SolveConfig& config,
                     Params params)
    : instance_(instance), config_(config), params_(params) {}

namespace {

// Local enumeration of the configurations of one sink (integral flows ending
// at the sink with bounded congestion and enough coverage). Kept separate
// from the brute-force oracle module on purpose.
std::vector<IntFlow> enumerate_columns(const Level& lv, int sink, double alpha,
                                       std::int64_t beta, double budget_cap) {
  std::vector<IntFlow> out;
  const int E = lv.num_edges();
  if (E > 16) return out;
  double states = 1.0;
  for (int e = 0; e < E; ++e) {
    states *= static_cast<double>(std::min<std::int64_t>(beta, (std::int64_t)budget_cap) + 1);
    if (states > 2e5) return out;  // caller falls back to a status
  }
  const std::int64_t cap = std::min<std::int64_t>(beta, (std::int64_t)budget_cap);
  IntFlow g(E, 0);
  while (true) {
    bool ok = true;
    for (int v = 0; v < lv.num_vertices() && ok; ++v) {
      std::int64_t in = 0, outflow = 0;
      for (int e : lv.in_edges(v)) in += g[e];
      for (int e : lv.out_edges(v)) outflow += g[e];
      if (lv.is_source(v)) {
        if (in != 0) ok = false;
      } else if (lv.is_sink(v)) {
        if (outflow != 0) ok = false;
        if (v != sink && in != 0) ok = false;
      } else if (in != outflow) {
        ok = false;
      }
    }
    if (ok) {
      std::vector<int> got;
      for (int e : lv.in_edges(sink))
        if (g[e] > 0) got.push_back(e);
      if (!got.empty() &&
          lv.sink_value(lv.sink_position(sink), got) >= 1.0 / alpha - 1e-9)
        out.push_back(g);
    }
    int pos = 0;
    while (pos < E && ++g[pos] > cap) g[pos++] = 0;
    if (pos == E) break;
  }
  return out;
}

}  // namespace

// Exact resolution at the last level: the configuration sets are finite, so
// both the primal witness and the refutation certificate come from rational
// LPs. Returns Status only when the enumeration caps are exceeded.
MembershipResult ClpSolver::exact_last_level(const std::vector<int>& sinks,
                                             const Eigen::VectorXd& budget) {
  const int level = instance_.num_levels() - 1;
  const Level& lv = instance_.level(level);
  const int E = lv.num_edges();
  double cap = 0.0;
  for (int e = 0; e < E; ++e) cap = std::max(cap, budget[e]);

  std::vector<DwColumn> columns;
  for (int v : sinks) {
    for (IntFlow& g : enumerate_columns(lv, v, params_.alpha, params_.beta, cap)) {
      DwColumn col;
      col.sink_vertex = v;
      col.coverage = lv.sink_value(lv.sink_position(v), covered_edges(lv, v, g));
      col.flow = std::move(g);
      columns.push_back(std::move(col));
    }
    bool any = false;
    for (const auto& c : columns)
      if (c.sink_vertex == v) any = true;
    if (!any && lv.num_edges() > 16)
      return MembershipResult::failure("exact base case beyond enumeration caps");
  }
  if (auto witness = reconstruct_primal(instance_, level, sinks, budget, columns)) {
    if (audit_witness(instance_, *witness, params_.alpha, params_.beta))
      return MembershipResult::accepted(witness);
  }

  // Refutation: a dual point on the objective = -1 slice satisfying every
  // (1,1) column constraint. Farkas guarantees one exists when the primal
  // above is infeasible (the (1,1) system is contained in the (alpha,beta)
  // one).
  std::vector<DwColumn> strict;
  for (int v : sinks)
    for (IntFlow& g : enumerate_columns(lv, v, 1.0, 1, 1.0)) {
      DwColumn col;
      col.sink_vertex = v;
      col.flow = std::move(g);
      strict.push_back(std::move(col));
    }
  const int S = static_cast<int>(sinks.size());
  LinearProgram lp(S + E);  // pi per sink then mu per edge
  auto pi_var = [&](int v) {
    return static_cast<int>(std::find(sinks.begin(), sinks.end(), v) -
                            sinks.begin());
  };
  for (const DwColumn& col : strict) {
    LinConstraint c;
    c.rel = Rel::Ge;
    c.rhs = Rat(0);
    for (int e = 0; e < E; ++e)
      if (col.flow[e] > 0) c.terms.push_back({S + e, Rat(col.flow[e])});
    c.terms.push_back({pi_var(col.sink_vertex), Rat(-1)});
    lp.add_constraint(std::move(c));
  }
  {
    LinConstraint slice;
    slice.rel = Rel::Eq;
    slice.rhs = Rat(-1);
    for (int e = 0; e < E; ++e) {
      const Rat b = rat_from_double(budget[e]);
      if (b != 0) slice.terms.push_back({S + e, b});
    }
    for (int i = 0; i < S; ++i) slice.terms.push_back({i, Rat(-1)});
    lp.add_constraint(std::move(slice));
  }
  LpResult dual_point = lp_feasible(lp);
  if (dual_point.status != LpStatus::Optimal)
    throw ContractError("exact base case: neither primal nor dual resolved");
  RefutationCertificate cert;
  cert.dual.mu = Eigen::VectorXd::Zero(E);
  cert.w = Eigen::VectorXd::Zero(E);
  double rhs = 0.0;
  for (int i = 0; i < S; ++i) {
    cert.dual.pi[sinks[i]] = to_double(dual_point.x[i]);
    rhs += to_double(dual_point.x[i]);
  }
  for (int e = 0; e < E; ++e) {
    cert.dual.mu[e] = to_double(dual_point.x[S + e]);
    cert.w[e] = cert.dual.mu[e];
  }
  cert.rhs = rhs;
  const double norm = cert.w.norm();
  if (norm > 1e-12) {
    cert.w /= norm;
    cert.rhs /= norm;
  }
  return MembershipResult::refuted(std::move(cert));
}

namespace {

std::string cache_key(int level, const std::vector<int>& sinks,
                      const Eigen::VectorXd& budget) {
  std::ostringstream os;
  os << level << '|';
  for (int v : sinks) os << v << ',';
  os << '|';
  for (int k = 0; k < budget.size(); ++k)
    os << static_cast<long long>(std::llround(budget[k] * 1e9)) << ',';
  return os.str();
}

struct EarlyAccept {
  std::shared_ptr<const DwWitness> witness;
};

struct StatusEscape {
  std::string message;
};

}  // namespace

MembershipResult ClpSolver::membership(int level, std::vector<int> sinks,
                                       Eigen::VectorXd budget) {
  std::sort(sinks.begin(), sinks.end());
  sinks.erase(std::unique(sinks.begin(), sinks.end()), sinks.end());
  const std::string key = cache_key(level, sinks, budget);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  MembershipResult res = membership_uncached(level, sinks, budget);
  if (res.kind != MembershipResult::Kind::Status) cache_.emplace(key, res);
  return res;
}

MembershipResult ClpSolver::membership_uncached(int level,
                                                const std::vector<int>& sinks,
                                                const Eigen::VectorXd& budget) {
  if (level < 0 || level >= instance_.num_levels())
    throw InputError("membership: level out of range");
  const int suffix = instance_.suffix_edge_count(level);
  if (budget.size() != suffix) throw InputError("membership: budget size mismatch");

  // Nonnegativity of the budget is part of every B(T*,1,1).
  for (int k = 0; k < suffix; ++k) {
    if (budget[k] < -1e-12) {
      RefutationCertificate cert;
      cert.dual.mu = Eigen::VectorXd::Zero(suffix);
      cert.w = Eigen::VectorXd::Zero(suffix);
      cert.w[k] = 1.0;
      cert.rhs = 0.0;
      return MembershipResult::refuted(std::move(cert));
    }
  }

  const Level& lv = instance_.level(level);
  std::vector<int> kept;
  for (int v : sinks) {
    if (!lv.is_sink(v)) throw InputError("membership: target is not a sink");
    if (!lv.in_edges(v).empty()) kept.push_back(v);  // degenerate sinks are covered
  }
  if (kept.empty()) {
    auto witness = std::make_shared<DwWitness>();
    witness->level = level;
    witness->budget = budget;
    return MembershipResult::accepted(std::move(witness));
  }

  const int S = static_cast<int>(kept.size());
  const int dim = (S - 1) + suffix;
  const int v0 = kept[0];

  SeparationDriver sep(
      instance_, level, kept, params_, config_,
      [this, level](const std::vector<int>& s, const Eigen::VectorXd& b) {
        return membership(level + 1, s, b);
      },
      stream_seed_for(level, kept));

  std::vector<DwColumn> columns;
  std::set<std::string> column_keys;
  bool new_column_since_check = false;

  // pi_{v0} is eliminated against the normalization slice
  // sum_e b(e) mu_e - sum_v pi_v = -1.
  auto decode = [&](const Eigen::VectorXd& z) {
    DualPoint dual;
    dual.mu = Eigen::VectorXd::Zero(suffix);
    double others = 0.0;
    for (int j = 1; j < S; ++j) {
      dual.pi[kept[j]] = z[j - 1];
      others += z[j - 1];
    }
    for (int k = 0; k < suffix; ++k) dual.mu[k] = z[S - 1 + k];
    dual.pi[v0] = 1.0 + budget.dot(dual.mu) - others;
    return dual;
  };
  // Lifts a functional a_pi.pi + a_mu.mu + c0 >= 0 into z-space.
  auto lift_cut = [&](const std::map<int, double>& a_pi, const Eigen::VectorXd& a_mu,
                      double c0) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
    double constant = c0;
    for (int k = 0; k < suffix; ++k) grad[S - 1 + k] += a_mu[k];
    for (const auto& [v, coeff] : a_pi) {
      if (v == v0) {
        constant += coeff;  // pi_v0 contributes its constant 1
        for (int j = 1; j < S; ++j) grad[j - 1] -= coeff;
        for (int k = 0; k < suffix; ++k) grad[S - 1 + k] += coeff * budget[k];
      } else {
        const auto pos = std::find(kept.begin(), kept.end(), v) - kept.begin();
        grad[pos - 1] += coeff;
      }
    }
    return SeparationResponse::separate(-grad, constant);
  };

  SeparationCallback oracle = [&](const Eigen::VectorXd& z) -> SeparationResponse {
    DualPoint dual = decode(z);
    // Nonnegativity cuts first.
    for (int j = 1; j < S; ++j) {
      if (dual.pi[kept[j]] < -1e-11) {
        std::map<int, double> a{{kept[j], 1.0}};
        return lift_cut(a, Eigen::VectorXd::Zero(suffix), 0.0);
      }
    }
    for (int k = 0; k < suffix; ++k) {
      if (dual.mu[k] < -1e-11) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(suffix);
        a[k] = 1.0;
        return lift_cut({}, a, 0.0);
      }
    }
    if (dual.pi[v0] < -1e-11)
      return lift_cut({{v0, 1.0}}, Eigen::VectorXd::Zero(suffix), 0.0);

    ++separation_calls_;
    SepOutcome out = sep.separate(dual);
    if (out.kind == SepOutcome::Kind::Status) throw StatusEscape{out.status};
    if (out.kind == SepOutcome::Kind::NoViolation) return SeparationResponse::accept();

    const DwColumn& col = out.column;
    {
      std::ostringstream os;
      os << col.sink_vertex << '#';
      for (auto f : col.flow) os << f << ',';
      os << '#';
      for (int k = 0; k < col.d.size(); ++k)
        os << static_cast<long long>(std::llround(col.d[k] * 1e7)) << ',';
      if (column_keys.insert(os.str()).second) {
        columns.push_back(col);
        new_column_since_check = true;
      }
    }
    if (new_column_since_check) {
      new_column_since_check = false;
      if (auto witness = reconstruct_primal(instance_, level, kept, budget, columns)) {
        if (auto audit = audit_witness(instance_, *witness, params_.alpha,
                                       params_.beta);
            audit)
          throw EarlyAccept{witness};
      }
    }
    // Cut from the violated dual constraint sum g mu + sum d mu - pi_v >= 0.
    const Level& l = instance_.level(level);
    Eigen::VectorXd a_mu = Eigen::VectorXd::Zero(suffix);
    for (int e = 0; e < l.num_edges(); ++e)
      a_mu[e] = static_cast<double>(col.flow[e]);
    for (int k = 0; k < col.d.size(); ++k) a_mu[l.num_edges() + k] = col.d[k];
    return lift_cut({{col.sink_vertex, -1.0}}, a_mu, 0.0);
  };

  EllipsoidOptions opts;
  opts.outer_radius = config_.ellipsoid.outer_radius;
  opts.inner_radius = config_.ellipsoid.inner_radius;
  opts.hard_cap = level == instance_.num_levels() - 1
                      ? std::min(config_.ellipsoid.hard_cap,
                                 config_.ellipsoid.base_level_cap)
                      : config_.ellipsoid.hard_cap;

  try {
    // Warm-start probes on the normalization slice: uniform mu ladders with
    // uniform pi. A probe the oracle certifies is already the refutation
    // certificate; probe-found columns seed the restricted primal.
    for (double lambda : {0.0, 4.0, 64.0}) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
      Eigen::VectorXd mu = Eigen::VectorXd::Constant(suffix, lambda);
      const double u = (1.0 + budget.dot(mu)) / S;
      for (int j = 1; j < S; ++j) z[j - 1] = u;
      for (int k = 0; k < suffix; ++k) z[S - 1 + k] = lambda;
      SeparationResponse probe = oracle(z);
      if (probe.member) {
        DualPoint dual = decode(z);
        RefutationCertificate cert;
        cert.dual = dual;
        cert.w = dual.mu;
        cert.rhs = 0.0;
        for (const auto& [v, p] : dual.pi) cert.rhs += p;
        const double norm = cert.w.norm();
        if (norm > 1e-12) {
          cert.w /= norm;
          cert.rhs /= norm;
        }
        return MembershipResult::refuted(std::move(cert));
      }
    }

    FeasibilityResult run = solve_feasibility(dim, opts, oracle);
    if (run.found()) {
      DualPoint dual = decode(run.point);
      RefutationCertificate cert;
      cert.dual = dual;
      cert.w = dual.mu;
      cert.rhs = 0.0;
      for (const auto& [v, p] : dual.pi) cert.rhs += p;
      const double norm = cert.w.norm();
      if (norm > 1e-12) {
        cert.w /= norm;
        cert.rhs /= norm;
      }
      return MembershipResult::refuted(std::move(cert));
    }
    // Volume or budget ran out: the encountered columns are the solution
    // support the master needs, when one exists.
    if (auto witness = reconstruct_primal(instance_, level, kept, budget, columns)) {
      if (auto audit = audit_witness(instance_, *witness, params_.alpha, params_.beta);
          audit)
        return MembershipResult::accepted(witness);
      return MembershipResult::failure("reconstructed witness failed its audit");
    }
    if (level == instance_.num_levels() - 1) return exact_last_level(kept, budget);
    return MembershipResult::failure(
        run.status == FeasibilityStatus::BudgetExhausted
            ? "membership: ellipsoid budget exhausted without certificate"
            : "membership: volume exhausted and restricted primal infeasible");
  } catch (const EarlyAccept& accept) {
    return MembershipResult::accepted(accept.witness);
  } catch (const StatusEscape& status) {
    return MembershipResult::failure(status.message);
  }
}

std::uint64_t ClpSolver::stream_seed_for(int level,
                                         const std::vector<int>& sinks) const {
  std::uint64_t h = config_.seed ^ (0x9e3779b97f4a7c15ULL + level);
  for (int v : sinks) h = h * 1099511628211ULL + static_cast<std::uint64_t>(v + 1);
  return h;
}

}  // namespace santa
