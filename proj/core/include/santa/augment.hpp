#pragma once

#include <functional>
#include <optional>
#include <ostream>

#include "santa/aug_build.hpp"
#include "santa/config.hpp"
#include "santa/flow.hpp"

namespace santa {

struct StructuredFlow {
  AugSolution solution;
  bool fresh_sources_case = false;  // case (a): level-1 flow from s(r) only
  double t_coverage = 0.0;          // f_t of the surviving level-1 flow
};

// Lemma-style cleanup of a feasible solution covering t: either keep only the
// fresh-source paths into t, or keep only private-release paths and prune the
// deeper levels through the depth marking with the 1/(2h) fraction rule. The
// result has coverage at least 1/(2 h alpha) at t, never higher congestion,
// and the last level uses no private-release sources.
StructuredFlow structure_flow(const BuiltAug& built, const AugSolution& solution,
                              double alpha, std::int64_t beta, double gamma,
                              bool enforce_h_bound);

// Property checker for the lemma's two guarantees plus the coverage floor.
FeasibilityReport check_structured(const BuiltAug& built, const StructuredFlow& s,
                                   double alpha, std::int64_t beta);

struct AugmentStats {
  int uncovered_before = 0;
  int uncovered_after = 0;
  bool fresh_sources_case = false;
  double min_complex_value = 0.0;
  std::int64_t congestion = 0;
};

// One augmentation step: turns an (alpha,beta)-feasible solution of
// I(sigma_k, h) into sigma_{k+1}, reducing the uncovered basic players by the
// lemma factor while keeping every complex player above its value floor.
Assignment augment_once(const CanonicalInstance& canonical, const Assignment& sigma_k,
                        const BuiltAug& built, const AugSolution& solution,
                        double alpha, std::int64_t beta, double gamma, int k,
                        bool enforce_h_bound, AugmentStats* stats = nullptr);

struct AugSolverOutcome {
  enum class Kind { Solution, NoSolution, Status };
  Kind kind = Kind::Status;
  AugSolution solution;
  double alpha = 1.0;
  std::int64_t beta = 1;
  std::string status;
};

// Callback solving the gap problem on one augmentation instance: an
// (alpha,beta) solution covering the targets, or a certificate that no (1,1)
// solution exists.
using AugSolver =
    std::function<AugSolverOutcome(const BuiltAug&, const std::vector<int>&)>;

struct GapResult {
  enum class Kind { Solved, Reject, Status };
  Kind kind = Kind::Status;
  Assignment assignment;
  double min_value = 0.0;
  int iterations = 0;
  std::string status;
};

// Iterates augment_once from the all-private starting assignment until every
// basic player is covered; rejects only when the solver certifies that no
// coverage-1 congestion-1 augmentation exists (which bounds OPT below 1).
// Progress records are streamed to `trace` as JSON lines when given.
GapResult solve_gap(const CanonicalInstance& canonical, double gamma, int h,
                    const AugSolver& solver, const SolveConfig& config,
                    std::ostream* trace = nullptr);

}  // namespace santa
