#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "santa/config.hpp"
#include "santa/level_graph.hpp"

namespace santa {

// Dual variables of the Dantzig-Wolfe master at one level: pi per target
// sink, mu per edge of the level suffix E_{>= i} (AugInstance suffix layout).
struct DualPoint {
  std::map<int, double> pi;  // sink vertex -> pi_v
  Eigen::VectorXd mu;

  double pi_of(int sink) const {
    auto it = pi.find(sink);
    return it == pi.end() ? 0.0 : it->second;
  }
};

struct DwWitness;

// One Dantzig-Wolfe column (v, g, d): a configuration g for sink v at level i
// plus the budget vector d it uses on later levels. `d_witness` attests
// d in B_{>= i+1}(L_i(g cap S_i), alpha, beta); it is null when the column
// has no later-level obligations.
struct DwColumn {
  int sink_vertex = -1;
  IntFlow flow;
  Eigen::VectorXd d;  // over E_{>= i+1}; size 0 at the last level
  std::shared_ptr<const DwWitness> d_witness;
  double coverage = 0.0;
};

struct DwEntry {
  DwColumn column;
  double weight = 0.0;  // y_{v,g,d}
};

// Witness for b in B_{>= level}(sinks, alpha, beta): column weights whose
// aggregated usage stays within the budget and covers every sink once.
struct DwWitness {
  int level = 0;
  std::vector<int> sinks;
  Eigen::VectorXd budget;  // over E_{>= level}
  std::vector<DwEntry> entries;
};

// Certificate that b lies outside B_{>= level}(sinks, 1, 1): a feasible dual
// point with objective -1 and the induced hyperplane w.b' >= rhs for every
// b' in B(sinks, 1, 1) while w.b < rhs.
struct RefutationCertificate {
  DualPoint dual;
  Eigen::VectorXd w;
  double rhs = 0.0;
};

struct MembershipResult {
  enum class Kind { Accepted, Refuted, Status };
  Kind kind = Kind::Status;
  std::shared_ptr<const DwWitness> witness;     // Accepted
  std::optional<RefutationCertificate> certificate;  // Refuted
  std::string status;                            // Status

  static MembershipResult accepted(std::shared_ptr<const DwWitness> w) {
    MembershipResult r;
    r.kind = Kind::Accepted;
    r.witness = std::move(w);
    return r;
  }
  static MembershipResult refuted(RefutationCertificate c) {
    MembershipResult r;
    r.kind = Kind::Refuted;
    r.certificate = std::move(c);
    return r;
  }
  static MembershipResult failure(std::string why) {
    MembershipResult r;
    r.kind = Kind::Status;
    r.status = std::move(why);
    return r;
  }
};

// lhs - pi_v of the dual constraint for a column at `level`; negative means
// the column violates the dual point.
double dual_violation_value(const AugInstance& instance, int level,
                            const DualPoint& dual, const DwColumn& column);

// Structural audit of a witness: per-column configuration validity
// (conservation, congestion, coverage), selection and budget constraints,
// and the recursive budget witnesses.
FeasibilityReport audit_witness(const AugInstance& instance, const DwWitness& witness,
                                double alpha, std::int64_t beta, double tol = 1e-6);

// Appendix-B split: masks the witness into the two disjoint sink sets; the
// budget remainder (slack of constraint (2)) goes to the first part.
struct SplitResult {
  std::shared_ptr<const DwWitness> first;
  std::shared_ptr<const DwWitness> second;
};
SplitResult split_budget(const DwWitness& witness, const std::vector<int>& first_sinks,
                         const std::vector<int>& second_sinks);

// Merge direction of the same lemma: sums budgets and concatenates entries.
std::shared_ptr<const DwWitness> merge_witnesses(const DwWitness& a,
                                                 const DwWitness& b);

// Solves the restricted primal over the encountered columns; nullopt when the
// restricted system is infeasible for this budget.
std::shared_ptr<const DwWitness> reconstruct_primal(
    const AugInstance& instance, int level, const std::vector<int>& sinks,
    const Eigen::VectorXd& budget, const std::vector<DwColumn>& columns);

// Las-Vegas membership test for B_{>= level}(sinks, alpha, beta) against the
// separation tier built on continuous greedy. One solver instance per
// augmentation instance; memoizes recursive query results.
class ClpSolver {
 public:
  ClpSolver(const AugInstance& instance, const SolveConfig& config, Params params);

  MembershipResult membership(int level, std::vector<int> sinks,
                              Eigen::VectorXd budget);

  const Params& params() const { return params_; }
  long separation_calls() const { return separation_calls_; }

 private:
  friend class SeparationDriver;

  MembershipResult membership_uncached(int level, const std::vector<int>& sinks,
                                       const Eigen::VectorXd& budget);
  MembershipResult exact_last_level(const std::vector<int>& sinks,
                                    const Eigen::VectorXd& budget);
  std::uint64_t stream_seed_for(int level, const std::vector<int>& sinks) const;

  const AugInstance& instance_;
  const SolveConfig& config_;
  Params params_;
  std::map<std::string, MembershipResult> cache_;
  long separation_calls_ = 0;
};

}  // namespace santa
