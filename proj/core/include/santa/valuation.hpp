#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "santa/errors.hpp"

namespace santa {

// A bundle is a sorted, duplicate-free list of resource indices.
using Bundle = std::vector<int>;

Bundle make_bundle(std::vector<int> resources);

// Monotone submodular set function over resource indices. Implementations
// must be normalized (f(empty) == 0), monotone and submodular; the
// constructible kinds guarantee this by construction, ExplicitTable by a
// validation pass.
class Valuation {
 public:
  virtual ~Valuation() = default;
  // `bundle` is sorted and duplicate-free.
  virtual double eval(const Bundle& bundle) const = 0;
  // Resources that can affect the function value, sorted.
  virtual std::vector<int> support() const = 0;
};

class AdditiveValuation final : public Valuation {
 public:
  explicit AdditiveValuation(std::map<int, double> values);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;
  const std::map<int, double>& values() const { return values_; }

 private:
  std::map<int, double> values_;
};

class WeightedCoverageValuation final : public Valuation {
 public:
  // covers: resource -> set of universe elements; weights: element -> w >= 0.
  WeightedCoverageValuation(std::map<int, std::vector<int>> covers,
                            std::map<int, double> weights);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;
  const std::map<int, std::vector<int>>& covers() const { return covers_; }
  const std::map<int, double>& weights() const { return weights_; }

 private:
  std::map<int, std::vector<int>> covers_;
  std::map<int, double> weights_;
};

class TruncatedAdditiveValuation final : public Valuation {
 public:
  TruncatedAdditiveValuation(std::map<int, double> values, double cap);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;
  double cap() const { return cap_; }
  const std::map<int, double>& values() const { return values_; }

 private:
  std::map<int, double> values_;
  double cap_;
};

class ExplicitTableValuation final : public Valuation {
 public:
  // ground: the resources the table speaks about (<= 20); table[mask] is the
  // value of the subset of `ground` selected by `mask`. Resources outside
  // the ground set never change the value. With validate=true (the default),
  // construction rejects tables that are not normalized monotone submodular.
  ExplicitTableValuation(std::vector<int> ground, std::vector<double> table,
                         bool validate = true);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;
  const std::vector<int>& ground() const { return ground_; }
  double value_of_mask(std::uint32_t mask) const { return table_[mask]; }

 private:
  std::vector<int> ground_;
  std::vector<double> table_;
};

// f(S) = base(S intersect allowed), used by the canonical reduction where a
// player's big resources are masked out of its small-value function.
class RestrictedValuation final : public Valuation {
 public:
  RestrictedValuation(std::shared_ptr<const Valuation> base,
                      std::vector<int> allowed);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;

 private:
  std::shared_ptr<const Valuation> base_;
  std::vector<int> allowed_;  // sorted
};

// f(S) = base(S) / divisor.
class ScaledValuation final : public Valuation {
 public:
  ScaledValuation(std::shared_ptr<const Valuation> base, double divisor);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;

 private:
  std::shared_ptr<const Valuation> base_;
  double divisor_;
};

// f(S) = min(cap, base(S)). Truncation at a constant preserves monotone
// submodularity.
class CappedValuation final : public Valuation {
 public:
  CappedValuation(std::shared_ptr<const Valuation> base, double cap);
  double eval(const Bundle& bundle) const override;
  std::vector<int> support() const override;

 private:
  std::shared_ptr<const Valuation> base_;
  double cap_;
};

enum class ValuationKind { Additive, WeightedCoverage, TruncatedAdditive, ExplicitTable, Derived };

// Value-query handle: owns the function, a scale divisor (used by the
// binary-search eta-normalization) and a query counter. Copies share the
// function and the counter.
class ValuationOracle {
 public:
  ValuationOracle() = default;
  ValuationOracle(ValuationKind kind, std::shared_ptr<const Valuation> fn);

  static ValuationOracle additive(std::map<int, double> values);
  static ValuationOracle weighted_coverage(std::map<int, std::vector<int>> covers,
                                           std::map<int, double> weights);
  static ValuationOracle truncated_additive(std::map<int, double> values, double cap);
  static ValuationOracle explicit_table(std::vector<int> ground,
                                        std::vector<double> table,
                                        bool validate = true);

  ValuationKind kind() const { return kind_; }
  bool valid() const { return fn_ != nullptr; }
  const std::shared_ptr<const Valuation>& function() const { return fn_; }
  // The function with the scale divisor baked in.
  std::shared_ptr<const Valuation> scaled_function() const;

  // f(bundle) / scale; counts one query.
  double evaluate(const Bundle& bundle) const;
  // f(base + r) - f(base); two queries. Requires r not in base.
  double marginal(const Bundle& base, int r) const;

  std::vector<int> support() const { return fn_->support(); }
  double scale() const { return scale_; }
  // Same function divided by eta (> 0). Shares the query counter.
  ValuationOracle scaled(double eta) const;

  std::uint64_t query_count() const { return counter_->load(); }
  void reset_query_count() const { counter_->store(0); }

 private:
  ValuationKind kind_ = ValuationKind::Derived;
  std::shared_ptr<const Valuation> fn_;
  double scale_ = 1.0;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_ =
      std::make_shared<std::atomic<std::uint64_t>>(0);
};

struct SubmodularityViolation {
  Bundle set_a;  // A subset of B
  Bundle set_b;
  int resource;  // r not in B with marginal(r|A) < marginal(r|B), or the
                 // monotonicity/normalization witness
  std::string reason;
};

struct SubmodularityVerdict {
  bool ok = true;
  std::optional<SubmodularityViolation> violation;
};

// Exhaustive check of normalization, monotonicity and diminishing returns
// over the oracle support. Rejects supports larger than 20 elements.
SubmodularityVerdict check_submodular(const ValuationOracle& oracle,
                                      double tol = 1e-9);

}  // namespace santa
