#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace santa {

// A separating hyperplane: every point of the inner (target) set satisfies
// w.x <= rhs while the queried point has w.x >= rhs. Cuts are central, so
// only the direction matters for the update; rhs is kept for diagnostics and
// contract checks.
struct Hyperplane {
  Eigen::VectorXd w;
  double rhs = 0.0;
};

struct SeparationResponse {
  bool member = false;
  Hyperplane cut;

  static SeparationResponse accept() { return {true, {}}; }
  static SeparationResponse separate(Eigen::VectorXd w, double rhs) {
    return {false, {std::move(w), rhs}};
  }
};

using SeparationCallback = std::function<SeparationResponse(const Eigen::VectorXd&)>;

enum class FeasibilityStatus {
  FoundPoint,       // callback accepted the queried center
  VolumeExhausted,  // the volume budget ran out: inner set smaller than the
                    // inner ball (treated as "no solution found")
  BudgetExhausted,  // the configured hard cap stopped the run early
};

struct CutRecord {
  Eigen::VectorXd center;
  Hyperplane cut;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::VolumeExhausted;
  Eigen::VectorXd point;  // valid when status == FoundPoint
  std::vector<CutRecord> transcript;
  long iterations = 0;

  bool found() const { return status == FeasibilityStatus::FoundPoint; }
};

struct EllipsoidOptions {
  double outer_radius = 1e3;
  double inner_radius = 1e-6;
  long hard_cap = 1'000'000;          // from config; overrides the volume budget
  bool record_transcript = false;
  std::optional<Eigen::VectorXd> start_center;
  double contract_tol = 1e-6;         // per-iteration volume-factor assertion
};

// Volume-budget iteration count ceil(2 (dim+1)^2 ln(R/r)).
long ellipsoid_iteration_budget(int dim, double outer_radius, double inner_radius);

// Central-cut ellipsoid search for a point the callback accepts. The engine
// holds no global state and may be instantiated recursively from callbacks.
FeasibilityResult solve_feasibility(int dim, const EllipsoidOptions& options,
                                    const SeparationCallback& oracle);

struct MaximizeResult {
  bool found = false;
  Eigen::VectorXd point;
  double value = 0.0;
};

// Reduces optimization to feasibility by binary search over the optimum: the
// returned point is accepted by the oracle and its objective is within
// `eps_bs` of the best threshold any accepted point reached.
MaximizeResult maximize_with_binary_search(int dim, const EllipsoidOptions& options,
                                           const Eigen::VectorXd& objective,
                                           const SeparationCallback& oracle,
                                           double eps_bs);

std::string transcript_to_json(const FeasibilityResult& result);

}  // namespace santa
