#include "santa/generators.hpp"

#include <algorithm>
#include <cmath>

#include "santa/rng.hpp"

namespace santa {

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

std::vector<std::string> names(const char* prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Round-robin bundles; every player gets floor/ceil(R/P) resources.
std::vector<std::vector<int>> bundles(int players, int resources) {
  std::vector<std::vector<int>> out(players);
  for (int r = 0; r < resources; ++r) out[r % players].push_back(r);
  return out;
}

GeneratedInstance planted_additive(int players, int resources, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x70616464ULL);
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  const auto part = bundles(players, resources);
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    std::map<int, double> values;
    double total = 0.0;
    std::vector<double> raw;
    for (int r : part[p]) {
      (void)r;
      raw.push_back(unif(rng));
      total += raw.back();
    }
    for (std::size_t i = 0; i < part[p].size(); ++i)
      values[part[p][i]] = round6(raw[i] / total);
    // Rounding drift is absorbed by the first bundle resource so the bundle
    // sums to exactly 1.
    double sum = 0.0;
    for (const auto& [r, v] : values) sum += v;
    values[part[p][0]] = round6(values[part[p][0]] + (1.0 - sum));
    if (p > 0) {
      // Small positive values elsewhere; player 0 pins the optimum at 1.
      std::uniform_real_distribution<double> small(0.0, 0.3 / resources);
      for (int r = 0; r < resources; ++r)
        if (!values.count(r)) values[r] = round6(small(rng));
    }
    oracles.push_back(ValuationOracle::additive(std::move(values)));
  }
  GeneratedInstance out{Instance(names("r", resources), names("p", players),
                                 std::move(oracles)),
                        1.0};
  return out;
}

GeneratedInstance planted_coverage(int players, int resources, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x70636f76ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto part = bundles(players, resources);
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    // Universe of |bundle| elements, weights summing to 1; bundle resource i
    // covers element i, other resources cover random subsets (none for p=0).
    const int m = static_cast<int>(part[p].size());
    std::map<int, double> weights;
    double total = 0.0;
    std::vector<double> raw(m);
    for (int i = 0; i < m; ++i) {
      raw[i] = 0.2 + 0.8 * unif(rng);
      total += raw[i];
    }
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      weights[i] = round6(raw[i] / total);
      sum += weights[i];
    }
    weights[0] = round6(weights[0] + (1.0 - sum));
    std::map<int, std::vector<int>> covers;
    for (int i = 0; i < m; ++i) covers[part[p][i]] = {i};
    if (p > 0) {
      for (int r = 0; r < resources; ++r) {
        if (covers.count(r)) continue;
        std::vector<int> sub;
        for (int i = 0; i < m; ++i)
          if (unif(rng) < 0.3) sub.push_back(i);
        if (!sub.empty()) covers[r] = std::move(sub);
      }
    }
    oracles.push_back(
        ValuationOracle::weighted_coverage(std::move(covers), std::move(weights)));
  }
  return {Instance(names("r", resources), names("p", players), std::move(oracles)),
          1.0};
}

GeneratedInstance random_additive(int players, int resources, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x72616464ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    std::map<int, double> values;
    for (int r = 0; r < resources; ++r) values[r] = round6(unif(rng));
    oracles.push_back(ValuationOracle::additive(std::move(values)));
  }
  return {Instance(names("r", resources), names("p", players), std::move(oracles)),
          std::nullopt};
}

GeneratedInstance restricted_assignment(int players, int resources,
                                        std::uint64_t seed) {
  auto rng = make_rng(seed, 0x72657374ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> value(resources);
  for (int r = 0; r < resources; ++r) value[r] = round6(0.2 + 0.8 * unif(rng));
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    std::map<int, double> values;
    for (int r = 0; r < resources; ++r)
      if (unif(rng) < 0.6) values[r] = value[r];
    if (values.empty()) values[p % resources] = value[p % resources];
    oracles.push_back(ValuationOracle::additive(std::move(values)));
  }
  return {Instance(names("r", resources), names("p", players), std::move(oracles)),
          std::nullopt};
}

// Player 0 only values player 1's "private" resource; player 1 can be paid
// out with small resources. Forces the private-release augmentation path.
GeneratedInstance adversarial_private(int players, int resources,
                                      std::uint64_t seed) {
  if (resources < players + 1)
    throw InputError("adversarial-private-resource: need resources >= players + 1");
  auto rng = make_rng(seed, 0x61647670ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int smalls = resources - players;  // r_players .. r_resources-1
  std::vector<ValuationOracle> oracles;
  for (int p = 0; p < players; ++p) {
    std::map<int, double> values;
    if (p == 0) {
      values[1 % players == 0 ? 0 : 1] = 1.0;  // the contested resource
      oracles.push_back(ValuationOracle::additive(std::move(values)));
      continue;
    }
    values[p] = 1.0;  // own private
    if (p == 1) {
      // Enough small value to release the private: each small is worth
      // 2/smalls, capped at 1.
      for (int i = 0; i < smalls; ++i)
        values[players + i] = round6(std::min(1.0, 2.0 / smalls));
      oracles.push_back(ValuationOracle::truncated_additive(std::move(values), 1.0));
      continue;
    }
    // Noise: a little interest in the smalls.
    for (int i = 0; i < smalls; ++i)
      if (unif(rng) < 0.3) values[players + i] = round6(0.2 * unif(rng));
    oracles.push_back(ValuationOracle::truncated_additive(std::move(values), 1.0));
  }
  return {Instance(names("r", resources), names("p", players), std::move(oracles)),
          players >= 2 ? std::optional<double>(1.0) : std::nullopt};
}

}  // namespace

GeneratedInstance generate_instance(const std::string& family, int players,
                                    int resources, std::uint64_t seed) {
  if (players <= 0) throw InputError("generator: players must be positive");
  if (resources <= 0) throw InputError("generator: resources must be positive");
  if (family == "planted-additive" || family == "planted-coverage") {
    if (resources < players)
      throw InputError("planted families need resources >= players");
  }
  if (family == "planted-additive") return planted_additive(players, resources, seed);
  if (family == "planted-coverage") return planted_coverage(players, resources, seed);
  if (family == "random-additive") return random_additive(players, resources, seed);
  if (family == "restricted-assignment")
    return restricted_assignment(players, resources, seed);
  if (family == "adversarial-private-resource")
    return adversarial_private(players, resources, seed);
  throw InputError("unknown instance family '" + family + "'");
}

}  // namespace santa
