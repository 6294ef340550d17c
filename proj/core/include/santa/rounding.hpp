#pragma once

#include <memory>

#include "santa/clp.hpp"

namespace santa {

struct RoundLevelResult {
  IntFlow flow;                           // the sampled integral flow
  std::shared_ptr<const DwWitness> next;  // merged claim for level+1 (null at h)
  std::vector<int> next_sinks;            // sinks the claim must cover
  std::int64_t max_congestion = 0;
  int attempts = 0;
};

// Samples one configuration per target sink from the witness (weights
// renormalized to exactly 1), aggregates the flows and the next-level budget
// claims. Resamples the whole level when the congestion bound 2*gamma or the
// next-level budget bound gamma*(1+1/log n) fails; throws BudgetExhausted
// with the violated constraint once the attempt cap runs out.
RoundLevelResult round_level(const AugInstance& instance, const DwWitness& witness,
                             const std::vector<int>& target_sinks, double gamma,
                             const RoundingConfig& config, std::uint64_t seed);

struct RoundAllResult {
  AugSolution solution;
  std::vector<double> gamma_schedule;  // gamma_0 * (1+1/log n)^i per level
  std::int64_t max_congestion = 0;
};

// Applies round_level level by level, feeding each level's merged claim into
// the next. The budget schedule inflates by (1+1/log n) per level.
RoundAllResult round_all_levels(const AugInstance& instance,
                                const DwWitness& top_witness,
                                const std::vector<int>& target_sinks, double gamma0,
                                const RoundingConfig& config, std::uint64_t seed);

}  // namespace santa
