#include "santa/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace santa {

BinarySearchResult binary_search_solve(const Instance& instance, double gamma,
                                       const GapCallback& solver, int max_steps) {
  BinarySearchResult res;
  res.allocation = Assignment(instance.num_resources());
  if (instance.num_players() == 0) return res;

  Bundle everything;
  for (int r = 0; r < instance.num_resources(); ++r) everything.push_back(r);

  // Upper bound: no player can beat its value for the whole resource set.
  double upper = std::numeric_limits<double>::infinity();
  double lower = 0.0;
  for (int p = 0; p < instance.num_players(); ++p) {
    upper = std::min(upper, instance.evaluate(p, everything));
    double min_singleton = std::numeric_limits<double>::infinity();
    for (int r = 0; r < instance.num_resources(); ++r) {
      const double v = instance.evaluate(p, Bundle{r});
      if (v > 0.0) min_singleton = std::min(min_singleton, v);
    }
    if (std::isfinite(min_singleton)) lower = std::max(lower, min_singleton);
  }
  if (!(upper > 0.0)) return res;  // someone values everything at 0

  // Geometric grid with ratio 2, descending from the upper bound; one extra
  // point below the singleton floor keeps the OPT/2 guarantee at the boundary.
  std::vector<double> grid;
  for (int k = 0; k < max_steps; ++k) {
    const double eta = upper / std::pow(2.0, k);
    grid.push_back(eta);
    if (k > 0 && eta < lower) break;
  }
  std::reverse(grid.begin(), grid.end());  // ascending
  res.grid = grid;

  // The solver certifies OPT < eta on failure, so success is monotone along
  // the grid and bisection applies.
  std::optional<Assignment> best;
  double best_eta = 0.0;
  int lo = 0, hi = static_cast<int>(grid.size()) - 1;
  while (lo <= hi) {
    const int mid = (lo + hi) / 2;
    const double eta = grid[mid];
    std::optional<Assignment> attempt = solver(instance.scaled(eta), eta);
    if (attempt.has_value()) {
      best = std::move(attempt);
      best_eta = eta;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }

  if (best.has_value()) {
    res.eta_star = best_eta;
    res.allocation = std::move(*best);
    res.min_value = instance.min_value(res.allocation);
  }
  return res;
}

}  // namespace santa
