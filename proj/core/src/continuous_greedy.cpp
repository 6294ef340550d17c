#include "santa/continuous_greedy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "santa/rng.hpp"

namespace santa {

CgreedyResult continuous_greedy(const ValuationOracle& f,
                                const std::vector<int>& ground,
                                const LinearMaxOracle& oracle,
                                const CgreedyOptions& options) {
  const int n = static_cast<int>(ground.size());
  if (n > 30) throw CapabilityError("continuous_greedy: ground set above 30");
  if (!(options.delta > 0.0 && options.delta <= 1.0))
    throw InputError("continuous_greedy: delta must be in (0,1]");

  // Table-backed marginals when the ground set is small enough; direct value
  // queries otherwise.
  std::unique_ptr<SubsetTable> table;
  if (n <= 20) table = std::make_unique<SubsetTable>(f, ground);
  auto marginal = [&](std::uint32_t mask, int j) -> double {
    if (table) return table->marginal(mask, j);
    Bundle base;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) base.push_back(ground[i]);
    if (mask >> j & 1u) return 0.0;
    return f.marginal(base, ground[j]);
  };

  CgreedyResult result;
  result.point.assign(n, 0.0);
  const int steps = std::max(1, static_cast<int>(std::llround(1.0 / options.delta)));
  result.steps = steps;

  std::vector<double> w(n);
  for (int step = 0; step < steps; ++step) {
    // w_j = estimate of E[f(j | R(t))] with R(t) ~ product(y(t)).
    auto rng = make_rng(options.seed, 0x63677265ULL, step);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::fill(w.begin(), w.end(), 0.0);
    for (int s = 0; s < options.samples; ++s) {
      std::uint32_t mask = 0;
      for (int i = 0; i < n; ++i)
        if (unif(rng) < result.point[i]) mask |= 1u << i;
      for (int j = 0; j < n; ++j)
        if (!(mask >> j & 1u)) w[j] += marginal(mask, j);
    }
    for (double& wj : w) wj /= options.samples;

    std::optional<std::vector<double>> dir = oracle(w);
    if (!dir.has_value()) {
      result.p_empty = true;
      return result;
    }
    if (static_cast<int>(dir->size()) != n)
      throw ContractError("continuous_greedy: oracle dimension mismatch");
    for (int i = 0; i < n; ++i) {
      result.point[i] += options.delta * (*dir)[i];
      result.point[i] = std::clamp(result.point[i], 0.0, 1.0);
    }
  }
  return result;
}

}  // namespace santa
