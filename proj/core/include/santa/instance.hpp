#pragma once

#include <optional>
#include <string>
#include <vector>

#include "santa/valuation.hpp"

namespace santa {

// Total map resource index -> player index, kUnassigned for "no player".
struct Assignment {
  static constexpr int kUnassigned = -1;
  std::vector<int> owner;  // size = number of resources

  explicit Assignment(int num_resources = 0)
      : owner(static_cast<std::size_t>(num_resources), kUnassigned) {}

  int size() const { return static_cast<int>(owner.size()); }
  bool assigned(int r) const { return owner[r] != kUnassigned; }
  Bundle bundle_of(int player) const {
    Bundle b;
    for (int r = 0; r < size(); ++r)
      if (owner[r] == player) b.push_back(r);
    return b;
  }
};

class Instance {
 public:
  Instance() = default;
  Instance(std::vector<std::string> resource_names,
           std::vector<std::string> player_names,
           std::vector<ValuationOracle> valuations);

  int num_resources() const { return static_cast<int>(resource_names_.size()); }
  int num_players() const { return static_cast<int>(player_names_.size()); }
  const std::vector<std::string>& resource_names() const { return resource_names_; }
  const std::vector<std::string>& player_names() const { return player_names_; }
  const ValuationOracle& valuation(int player) const { return valuations_[player]; }
  const std::vector<ValuationOracle>& valuations() const { return valuations_; }

  // Checks the bundle against the resource universe; counts one query.
  double evaluate(int player, const Bundle& bundle) const;
  double min_value(const Assignment& a) const;

  // Same players, every valuation divided by eta.
  Instance scaled(double eta) const;

  int resource_index(const std::string& name) const;  // -1 if missing
  int player_index(const std::string& name) const;

 private:
  std::vector<std::string> resource_names_;
  std::vector<std::string> player_names_;
  std::vector<ValuationOracle> valuations_;
};

// JSON schema documented in docs/formats.md. `lenient_tables` skips the
// submodularity validation of explicit tables (used by the check-submodular
// subcommand, which wants to load and then report violations).
Instance instance_from_json(const std::string& json_text, bool lenient_tables = false);
Instance load_instance(const std::string& path, bool lenient_tables = false);
std::string instance_to_json(const Instance& inst);

}  // namespace santa
