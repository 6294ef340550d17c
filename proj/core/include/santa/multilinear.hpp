#pragma once

#include <cstdint>
#include <vector>

#include "santa/valuation.hpp"

namespace santa {

// Cached table of f over all subsets of a ground list (at most 20 elements).
// Positions in masks refer to indices into `ground`.
class SubsetTable {
 public:
  SubsetTable(const ValuationOracle& f, std::vector<int> ground);

  int size() const { return static_cast<int>(ground_.size()); }
  const std::vector<int>& ground() const { return ground_; }
  double value(std::uint32_t mask) const { return table_[mask]; }
  double marginal(std::uint32_t mask, int pos) const {
    return table_[mask | (1u << pos)] - table_[mask];
  }
  double full_value() const { return table_.back(); }

 private:
  std::vector<int> ground_;
  std::vector<double> table_;
};

// Exact multilinear extension F(x) by subset enumeration (|ground| <= 16).
double multilinear_exact(const SubsetTable& table, const std::vector<double>& x);

// Unbiased Monte-Carlo estimate of F(x); samples are drawn in batches with
// stream seeds derived from (seed, batch index), so the value is independent
// of evaluation schedule.
double multilinear_estimate(const ValuationOracle& f, const std::vector<int>& ground,
                            const std::vector<double>& x, int samples,
                            std::uint64_t seed);

// Same estimator over a precomputed table (no oracle queries).
double multilinear_estimate(const SubsetTable& table, const std::vector<double>& x,
                            int samples, std::uint64_t seed);

}  // namespace santa
