#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "santa/clp.hpp"
#include "santa/continuous_greedy.hpp"
#include "santa/flow.hpp"

namespace santa {

// Recursive query for B_{>= level+1}(sinks, alpha, beta).
using MembershipFn = std::function<MembershipResult(
    const std::vector<int>& sinks, const Eigen::VectorXd& budget)>;

struct SepOutcome {
  enum class Kind { Violation, NoViolation, Status };
  Kind kind = Kind::NoViolation;
  DwColumn column;     // Violation: dual_violation_value(column) < 0, verified
  std::string status;  // Status
};

// Fractional solution of the relaxed separation program for one guessed sink:
// flow g on the level, a d_s vector per linked source (y_s is the flow on the
// source's out-edge), and the membership witnesses backing constraint
// d_s in y_s * B(L({s}), alpha, beta).
struct FractionalSep {
  std::vector<double> g;                         // per level edge
  std::map<int, Eigen::VectorXd> d;              // source vertex -> d_s
  std::map<int, std::shared_ptr<const DwWitness>> d_witness;
  double objective = 0.0;                        // value of the linear objective
};

// Separation oracle for the dual of the DW master at one level: guesses the
// violated sink, handles large singletons, runs continuous greedy over
// LINSEP and rounds the fractional solution to a violating column.
class SeparationDriver {
 public:
  SeparationDriver(const AugInstance& instance, int level, std::vector<int> sinks,
                   Params params, const SolveConfig& config, MembershipFn recurse,
                   std::uint64_t seed);
  ~SeparationDriver();

  // One full separation pass at the given dual point.
  SepOutcome separate(const DualPoint& dual);

  // LINSEP(u*, alpha, beta, c): value at least the (1,1) optimum. `banned`
  // edges are forced to zero flow. Exposed for tests.
  FractionalSep solve_linsep(int target_sink, const DualPoint& dual,
                             const Eigen::VectorXd& objective,
                             const std::vector<int>& banned_edges);

  // Las-Vegas rounding of a fractional solution; nullopt when every attempt
  // fails the coverage/cost/congestion gates.
  std::optional<DwColumn> round_separation(int target_sink, const DualPoint& dual,
                                           const FractionalSep& fractional,
                                           const std::vector<int>& banned_edges,
                                           int attempt_cap);

 private:
  struct SinkContext;

  SepOutcome try_sink(int target_sink, const DualPoint& dual);
  std::optional<DwColumn> large_singleton_shortcut(SinkContext& ctx,
                                                   const DualPoint& dual);
  // Cheapest d in B(L({s}), alpha, beta) under mu, with witness.
  std::optional<std::pair<Eigen::VectorXd, std::shared_ptr<const DwWitness>>>
  cheapest_budget(int source_vertex, const DualPoint& dual);

  void verify_column(const DualPoint& dual, const DwColumn& column) const;

  const AugInstance& instance_;
  int level_;
  std::vector<int> sinks_;
  Params params_;
  const SolveConfig& config_;
  MembershipFn recurse_;
  std::uint64_t seed_;
  std::uint64_t attempt_counter_ = 0;

  std::vector<int> linked_sources_;  // usable sources with linking obligations
  std::map<int, std::unique_ptr<SinkContext>> sink_ctx_;
  // Cuts returned by recursive membership refutations, valid for the (1,1)
  // budget sets; pooled per source across the whole run.
  std::map<int, std::vector<std::pair<Eigen::VectorXd, double>>> cut_pool_;
};

}  // namespace santa
