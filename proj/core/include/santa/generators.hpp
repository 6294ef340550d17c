#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "santa/instance.hpp"

namespace santa {

struct GeneratedInstance {
  Instance instance;
  std::optional<double> planted_optimum;  // set for planted families
};

// Families: planted-additive, planted-coverage, random-additive,
// restricted-assignment, adversarial-private-resource.
GeneratedInstance generate_instance(const std::string& family, int players,
                                    int resources, std::uint64_t seed);

}  // namespace santa
