#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "santa/instance.hpp"

namespace santa {

// Canonical instance: basic players with 0/1 valuations given by a set of
// value-1 resources, and complex players with one private value-1 resource
// plus a small-value function whose singletons stay below 1/gamma.
// Player indexing convention: basic players first, then complex players.
struct CanonicalInstance {
  double gamma = 1.0;
  std::vector<std::string> resource_names;
  std::vector<std::vector<int>> basic_covers;   // per basic player, sorted
  std::vector<int> private_resource;            // per complex player
  std::vector<ValuationOracle> complex_small;   // value of non-private bundles,
                                                // capped at 1

  int num_resources() const { return static_cast<int>(resource_names.size()); }
  int num_basic() const { return static_cast<int>(basic_covers.size()); }
  int num_complex() const { return static_cast<int>(private_resource.size()); }
  int num_players() const { return num_basic() + num_complex(); }
  bool is_basic(int player) const { return player < num_basic(); }
  int complex_index(int player) const { return player - num_basic(); }

  double basic_value(int basic, const Bundle& bundle) const;
  double complex_value(int cplx, const Bundle& bundle) const;
  double player_value(int player, const Bundle& bundle) const;
  double singleton_value(int player, int r) const;
  bool singleton_is_one(int player, int r) const;

  // The full valuation of a complex player (1 if the private resource is in
  // the bundle, else the capped small value) as a query oracle.
  ValuationOracle complex_oracle(int cplx) const;

  // Checks the structural invariants; throws InputError on violation.
  void validate() const;
};

// Result of reducing a general instance: the canonical instance plus the
// data needed to translate solutions back.
struct CanonicalReduction {
  CanonicalInstance canonical;
  int num_original_resources = 0;            // canonical resource r < this is original
  std::vector<std::vector<int>> big_resources;  // per original player
  // original player p maps to basic player p and complex player p; the
  // private resource of complex p has canonical index
  // num_original_resources + p.
  int private_of(int original_player) const {
    return num_original_resources + original_player;
  }
};

// Splits every player into a basic and a complex player (2|P| players,
// |R|+|P| resources). Requires valuations normalized so the target value is 1.
CanonicalReduction canonicalize(const Instance& instance, double gamma);

// Maps a canonical assignment where every player pair reaches value >= 1/gamma
// back to an assignment of the original instance with value >= 1/gamma.
Assignment decanonicalize(const CanonicalReduction& red,
                          const Assignment& canonical_solution);

// View of a canonical instance as a plain instance (basic players become
// truncated-additive oracles), usable with the brute-force optimum.
Instance canonical_as_instance(const CanonicalInstance& c);

struct BinarySearchResult {
  double eta_star = 0.0;
  Assignment allocation;
  double min_value = 0.0;
  std::vector<double> grid;
};

// The callback receives the instance rescaled so the target is 1 and the raw
// eta; it returns an allocation of value >= eta/gamma in original units, or
// nullopt to certify OPT < eta.
using GapCallback =
    std::function<std::optional<Assignment>(const Instance& scaled, double eta)>;

// Geometric grid with ratio 2 over [max_p min positive singleton, upper
// bound], at most `max_steps` points; returns the largest grid point at which
// the callback succeeds.
BinarySearchResult binary_search_solve(const Instance& instance, double gamma,
                                       const GapCallback& solver,
                                       int max_steps = 40);

}  // namespace santa
