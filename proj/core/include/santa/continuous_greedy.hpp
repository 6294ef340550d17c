#pragma once

#include <functional>
#include <optional>

#include "santa/multilinear.hpp"

namespace santa {

// Approximate linear maximizer over a pair P subset-of Q of downward-closed
// polytopes: given weights w it returns some x in Q with w.x >= w.y for all
// y in P, or nullopt when it determines that P is empty.
using LinearMaxOracle =
    std::function<std::optional<std::vector<double>>(const std::vector<double>&)>;

struct CgreedyOptions {
  double delta = 0.02;
  int samples = 2000;
  std::uint64_t seed = 0;
};

struct CgreedyResult {
  bool p_empty = false;        // the oracle reported P empty
  std::vector<double> point;   // y(1), a convex combination of Q points
  int steps = 0;
};

// Continuous greedy over the multilinear extension of f restricted to
// `ground`. The output lies in Q and, when every singleton value is at most
// the optimum of F over P, reaches (1 - 1/e - eps) of that optimum with high
// probability.
CgreedyResult continuous_greedy(const ValuationOracle& f,
                                const std::vector<int>& ground,
                                const LinearMaxOracle& oracle,
                                const CgreedyOptions& options);

}  // namespace santa
