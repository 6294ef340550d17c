#pragma once

#include <stdexcept>
#include <string>

namespace santa {

// Malformed or out-of-contract input from the caller.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a hard-coded validity range (brute-force oracles etc.).
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant or a callback contract was violated.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// A budget (iterations, attempts, recursion depth) ran out before the
// computation could resolve. Distinct from infeasibility.
struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace santa
