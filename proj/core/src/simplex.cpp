#include "santa/simplex.hpp"

#include <algorithm>

#include "santa/errors.hpp"

namespace santa {

namespace {

// Dense tableau: rows = constraints, one column per variable plus rhs.
struct Tableau {
  int rows = 0, cols = 0;  // cols excludes the rhs column
  std::vector<RatVec> a;   // rows x (cols + 1)
  std::vector<int> basis;  // basic variable per row
  RatVec cost;             // current objective (maximize), size cols
  Rat objective_shift;

  Rat& at(int r, int c) { return a[r][c]; }
  Rat& rhs(int r) { return a[r][cols]; }

  void pivot(int row, int col) {
    const Rat p = a[row][col];
    for (int c = 0; c <= cols; ++c) a[row][c] /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rat f = a[r][col];
      for (int c = 0; c <= cols; ++c) a[r][c] -= f * a[row][c];
    }
    basis[row] = col;
  }

  // Reduced cost of column c under the current basis.
  RatVec reduced_costs() const {
    RatVec y(rows, Rat(0));  // multipliers: cost of basic variable per row
    for (int r = 0; r < rows; ++r) y[r] = cost[basis[r]];
    RatVec red = cost;
    for (int c = 0; c < cols; ++c) {
      Rat dot(0);
      for (int r = 0; r < rows; ++r)
        if (a[r][c] != 0) dot += y[r] * a[r][c];
      red[c] -= dot;
    }
    return red;
  }

  // Bland's rule; returns false when optimal, throws on unboundedness.
  // Columns at or beyond `max_enter` may not enter the basis (used to lock
  // artificials out in phase 2).
  bool step(int max_enter) {
    const RatVec red = reduced_costs();
    int enter = -1;
    for (int c = 0; c < max_enter; ++c) {
      if (red[c] > 0) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    Rat best;
    for (int r = 0; r < rows; ++r) {
      if (a[r][enter] <= 0) continue;
      const Rat ratio = a[r][cols] / a[r][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) throw BudgetExhausted("simplex: unbounded");
    pivot(leave, enter);
    return true;
  }

  Rat objective_value() const {
    Rat v = objective_shift;
    for (int r = 0; r < rows; ++r) v += cost[basis[r]] * a[r][cols];
    return v;
  }
};

struct Prepared {
  Tableau t;
  int structural = 0;
  int first_artificial = 0;
};

Prepared build(const LinearProgram& lp) {
  const auto& cons = lp.constraints();
  const int m = static_cast<int>(cons.size());
  const int n = lp.num_vars();

  int slacks = 0;
  for (const auto& c : cons)
    if (c.rel != Rel::Eq) ++slacks;

  Prepared p;
  p.structural = n;
  p.first_artificial = n + slacks;
  Tableau& t = p.t;
  t.rows = m;
  t.cols = n + slacks + m;  // artificial per row (unused ones stay nonbasic)
  t.a.assign(m, RatVec(t.cols + 1, Rat(0)));
  t.basis.assign(m, -1);
  t.cost.assign(t.cols, Rat(0));

  int slack_at = n;
  for (int r = 0; r < m; ++r) {
    Rat rhs = cons[r].rhs;
    Rat sign(1);
    Rel rel = cons[r].rel;
    if (rhs < 0) {  // normalize to rhs >= 0
      sign = Rat(-1);
      rhs = -rhs;
      if (rel == Rel::Le)
        rel = Rel::Ge;
      else if (rel == Rel::Ge)
        rel = Rel::Le;
    }
    for (const auto& [var, coeff] : cons[r].terms) {
      if (var < 0 || var >= n) throw InputError("simplex: variable out of range");
      t.a[r][var] += sign * coeff;
    }
    t.a[r][t.cols] = rhs;
    if (rel == Rel::Le) {
      t.a[r][slack_at] = 1;
      t.basis[r] = slack_at++;
    } else if (rel == Rel::Ge) {
      t.a[r][slack_at] = -1;
      ++slack_at;
    }
    if (t.basis[r] < 0) {
      t.a[r][p.first_artificial + r] = 1;
      t.basis[r] = p.first_artificial + r;
    }
  }
  return p;
}

LpResult run(const LinearProgram& lp, bool with_phase2) {
  Prepared p = build(lp);
  Tableau& t = p.t;

  // Phase 1: maximize -(sum of artificials).
  bool any_artificial_basic = false;
  for (int r = 0; r < t.rows; ++r)
    if (t.basis[r] >= p.first_artificial) any_artificial_basic = true;
  if (any_artificial_basic) {
    for (int c = p.first_artificial; c < t.cols; ++c) t.cost[c] = Rat(-1);
    while (t.step(t.cols)) {
    }
    if (t.objective_value() != 0) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive remaining artificials out of the basis.
    for (int r = 0; r < t.rows; ++r) {
      if (t.basis[r] < p.first_artificial) continue;
      int col = -1;
      for (int c = 0; c < p.first_artificial; ++c) {
        if (t.a[r][c] != 0) {
          col = c;
          break;
        }
      }
      if (col >= 0) t.pivot(r, col);
      // else: redundant row; the artificial stays basic at value 0.
    }
    std::fill(t.cost.begin(), t.cost.end(), Rat(0));
  }

  if (with_phase2) {
    const auto& obj = lp.objective();
    for (int c = 0; c < p.structural && c < static_cast<int>(obj.size()); ++c)
      t.cost[c] = obj[c];
    try {
      while (t.step(p.first_artificial)) {
      }
    } catch (const BudgetExhausted&) {
      LpResult res;
      res.status = LpStatus::Unbounded;
      return res;
    }
  }

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(p.structural, Rat(0));
  for (int r = 0; r < t.rows; ++r)
    if (t.basis[r] < p.structural) res.x[t.basis[r]] = t.a[r][t.cols];
  res.value = t.objective_value();
  return res;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) { return run(lp, true); }

LpResult lp_feasible(const LinearProgram& lp) { return run(lp, false); }

}  // namespace santa
