#pragma once

#include <ostream>

#include "santa/augment.hpp"
#include "santa/canonical.hpp"
#include "santa/clp.hpp"

namespace santa {

// Gap sub-solver backed by the full LP tier: membership query with the
// 6 beta log^3 n budget, then level-by-level randomized rounding.
AugSolverOutcome lp_rounding_solver(const BuiltAug& built,
                                    const std::vector<int>& targets,
                                    const SolveConfig& config, Params params);

struct EtaOutcome {
  double eta = 0.0;
  enum class Kind { Solved, Reject, Status } kind = Kind::Status;
  std::string status;
  int iterations = 0;
};

struct SolveReport {
  BinarySearchResult search;
  Params params;
  std::vector<EtaOutcome> attempts;
  bool any_status = false;
  int exit_code = 0;  // 0 solved, 2 certified reject everywhere, 3 degraded
};

// The full solver: binary search over eta, canonical reduction, gap solving
// via the LP tier, decanonicalization. Per-iteration progress goes to `trace`
// as JSON lines when given.
SolveReport solve_instance(const Instance& instance, const SolveConfig& config,
                           std::ostream* trace = nullptr);

// Same loop with a caller-provided gap sub-solver (tests use the brute-force
// augmentation search here).
SolveReport solve_instance_with(const Instance& instance, const SolveConfig& config,
                                const AugSolver& solver,
                                std::ostream* trace = nullptr);

}  // namespace santa
