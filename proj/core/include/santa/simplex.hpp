#pragma once

#include <vector>

#include "santa/rational.hpp"

namespace santa {

enum class Rel { Le, Ge, Eq };

struct LinConstraint {
  std::vector<std::pair<int, Rat>> terms;  // (variable, coefficient)
  Rel rel = Rel::Le;
  Rat rhs;
};

// max c^T x subject to the constraints and x >= 0, in exact rationals.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  void set_objective(int var, Rat coeff) {
    objective_.resize(num_vars_, Rat(0));
    objective_[var] = std::move(coeff);
  }
  void add_constraint(LinConstraint c) { constraints_.push_back(std::move(c)); }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  const std::vector<Rat>& objective() const { return objective_; }

 private:
  int num_vars_;
  std::vector<Rat> objective_;
  std::vector<LinConstraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  RatVec x;
};

// Two-phase dense simplex with Bland's rule; exact, no tolerances.
LpResult solve_lp(const LinearProgram& lp);

// Phase 1 only: any feasible point, or infeasibility.
LpResult lp_feasible(const LinearProgram& lp);

}  // namespace santa
