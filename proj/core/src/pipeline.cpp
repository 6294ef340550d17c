#include "santa/pipeline.hpp"

#include <json.hpp>

#include "santa/rounding.hpp"

namespace santa {

AugSolverOutcome lp_rounding_solver(const BuiltAug& built,
                                    const std::vector<int>& targets,
                                    const SolveConfig& config, Params params) {
  AugSolverOutcome out;
  const AugInstance& inst = built.instance;
  const int n = inst.total_vertices();
  const double budget = config.round_budget(n, params.beta);

  ClpSolver clp(inst, config, params);
  Eigen::VectorXd b =
      Eigen::VectorXd::Constant(inst.suffix_edge_count(0), budget);
  MembershipResult res;
  try {
    res = clp.membership(0, targets, b);
  } catch (const std::exception& e) {
    out.kind = AugSolverOutcome::Kind::Status;
    out.status = std::string("membership failed: ") + e.what();
    return out;
  }
  if (res.kind == MembershipResult::Kind::Refuted) {
    out.kind = AugSolverOutcome::Kind::NoSolution;
    return out;
  }
  if (res.kind == MembershipResult::Kind::Status) {
    out.kind = AugSolverOutcome::Kind::Status;
    out.status = res.status;
    return out;
  }

  try {
    RoundAllResult rounded =
        round_all_levels(inst, *res.witness, res.witness->sinks, budget,
                         config.rounding, config.seed);
    if (auto rep = check_feasible(inst, rounded.solution, targets, params.alpha,
                                  rounded.solution.congestion);
        !rep) {
      out.kind = AugSolverOutcome::Kind::Status;
      out.status = "rounded solution failed feasibility: " + rep.reason;
      return out;
    }
    out.kind = AugSolverOutcome::Kind::Solution;
    out.solution = std::move(rounded.solution);
    out.alpha = params.alpha;
    out.beta = out.solution.congestion;
    return out;
  } catch (const BudgetExhausted& e) {
    out.kind = AugSolverOutcome::Kind::Status;
    out.status = e.what();
    return out;
  }
}

SolveReport solve_instance_with(const Instance& instance, const SolveConfig& config,
                                const AugSolver& solver, std::ostream* trace) {
  SolveReport report;
  report.params = config.resolve(instance.num_resources() + instance.num_players());

  GapCallback callback = [&](const Instance& scaled, double eta) {
    EtaOutcome attempt;
    attempt.eta = eta;
    std::optional<Assignment> result;
    try {
      CanonicalReduction red = canonicalize(scaled, report.params.gamma);
      GapResult gap = solve_gap(red.canonical, report.params.gamma,
                                report.params.h, solver, config, trace);
      attempt.iterations = gap.iterations;
      if (gap.kind == GapResult::Kind::Solved) {
        attempt.kind = EtaOutcome::Kind::Solved;
        result = decanonicalize(red, gap.assignment);
      } else if (gap.kind == GapResult::Kind::Reject) {
        attempt.kind = EtaOutcome::Kind::Reject;
      } else {
        attempt.kind = EtaOutcome::Kind::Status;
        attempt.status = gap.status;
        report.any_status = true;
      }
    } catch (const std::exception& e) {
      attempt.kind = EtaOutcome::Kind::Status;
      attempt.status = e.what();
      report.any_status = true;
    }
    if (trace) {
      nlohmann::json j;
      j["event"] = "eta";
      j["eta"] = eta;
      j["outcome"] = attempt.kind == EtaOutcome::Kind::Solved   ? "solved"
                     : attempt.kind == EtaOutcome::Kind::Reject ? "reject"
                                                                : "status";
      if (!attempt.status.empty()) j["status"] = attempt.status;
      (*trace) << j.dump() << "\n";
    }
    report.attempts.push_back(attempt);
    return result;
  };

  report.search = binary_search_solve(instance, report.params.gamma, callback,
                                      config.binary_search_steps);
  if (report.search.eta_star > 0.0)
    report.exit_code = 0;
  else
    report.exit_code = report.any_status ? 3 : 2;
  return report;
}

SolveReport solve_instance(const Instance& instance, const SolveConfig& config,
                           std::ostream* trace) {
  AugSolver solver = [&](const BuiltAug& built, const std::vector<int>& targets) {
    return lp_rounding_solver(built, targets, config,
                              config.resolve(built.instance.total_vertices()));
  };
  return solve_instance_with(instance, config, solver, trace);
}

}  // namespace santa
