#include "santa/valuation.hpp"

#include <algorithm>
#include <cmath>

namespace santa {

namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw InputError(std::string(what) + " must be >= 0");
}

Bundle mask_to_bundle(std::uint32_t mask, const std::vector<int>& ground) {
  Bundle b;
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (mask >> i & 1u) b.push_back(ground[i]);
  return b;
}

}  // namespace

Bundle make_bundle(std::vector<int> resources) {
  std::sort(resources.begin(), resources.end());
  resources.erase(std::unique(resources.begin(), resources.end()), resources.end());
  return resources;
}

AdditiveValuation::AdditiveValuation(std::map<int, double> values)
    : values_(std::move(values)) {
  for (const auto& [r, v] : values_) {
    (void)r;
    require_nonneg(v, "additive value");
  }
}

double AdditiveValuation::eval(const Bundle& bundle) const {
  double sum = 0.0;
  for (int r : bundle) {
    auto it = values_.find(r);
    if (it != values_.end()) sum += it->second;
  }
  return sum;
}

std::vector<int> AdditiveValuation::support() const {
  std::vector<int> s;
  for (const auto& [r, v] : values_)
    if (v > 0.0) s.push_back(r);
  return s;
}

WeightedCoverageValuation::WeightedCoverageValuation(
    std::map<int, std::vector<int>> covers, std::map<int, double> weights)
    : covers_(std::move(covers)), weights_(std::move(weights)) {
  for (const auto& [e, w] : weights_) {
    (void)e;
    require_nonneg(w, "universe weight");
  }
}

double WeightedCoverageValuation::eval(const Bundle& bundle) const {
  std::vector<int> covered;
  for (int r : bundle) {
    auto it = covers_.find(r);
    if (it == covers_.end()) continue;
    covered.insert(covered.end(), it->second.begin(), it->second.end());
  }
  std::sort(covered.begin(), covered.end());
  covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
  double sum = 0.0;
  for (int e : covered) {
    auto it = weights_.find(e);
    if (it != weights_.end()) sum += it->second;
  }
  return sum;
}

std::vector<int> WeightedCoverageValuation::support() const {
  std::vector<int> s;
  for (const auto& [r, elems] : covers_) {
    for (int e : elems) {
      auto it = weights_.find(e);
      if (it != weights_.end() && it->second > 0.0) {
        s.push_back(r);
        break;
      }
    }
  }
  return s;
}

TruncatedAdditiveValuation::TruncatedAdditiveValuation(std::map<int, double> values,
                                                       double cap)
    : values_(std::move(values)), cap_(cap) {
  require_nonneg(cap, "cap");
  for (const auto& [r, v] : values_) {
    (void)r;
    require_nonneg(v, "additive value");
  }
}

double TruncatedAdditiveValuation::eval(const Bundle& bundle) const {
  double sum = 0.0;
  for (int r : bundle) {
    auto it = values_.find(r);
    if (it != values_.end()) sum += it->second;
  }
  return std::min(cap_, sum);
}

std::vector<int> TruncatedAdditiveValuation::support() const {
  std::vector<int> s;
  if (cap_ <= 0.0) return s;
  for (const auto& [r, v] : values_)
    if (v > 0.0) s.push_back(r);
  return s;
}

ExplicitTableValuation::ExplicitTableValuation(std::vector<int> ground,
                                               std::vector<double> table,
                                               bool validate)
    : ground_(std::move(ground)), table_(std::move(table)) {
  if (ground_.size() > 20)
    throw CapabilityError("explicit-table ground set larger than 20");
  if (!std::is_sorted(ground_.begin(), ground_.end()) ||
      std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end())
    throw InputError("explicit-table ground set must be sorted and unique");
  const std::size_t want = std::size_t(1) << ground_.size();
  if (table_.size() != want)
    throw InputError("explicit-table must list a value for every subset");
  if (validate) {
    const double tol = 1e-9;
    if (std::fabs(table_[0]) > tol)
      throw InputError("explicit-table: f(empty) must be 0");
    const int n = static_cast<int>(ground_.size());
    for (std::uint32_t mask = 0; mask < want; ++mask) {
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1u) continue;
        const std::uint32_t with = mask | (1u << i);
        if (table_[with] < table_[mask] - tol)
          throw InputError("explicit-table: not monotone");
        // diminishing returns against every superset reachable by one element
        for (int j = 0; j < n; ++j) {
          if (j == i || (mask >> j & 1u)) continue;
          const std::uint32_t sup = mask | (1u << j);
          if (table_[with] - table_[mask] <
              table_[sup | (1u << i)] - table_[sup] - tol)
            throw InputError("explicit-table: not submodular");
        }
      }
    }
  }
}

double ExplicitTableValuation::eval(const Bundle& bundle) const {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < ground_.size(); ++i)
    if (std::binary_search(bundle.begin(), bundle.end(), ground_[i]))
      mask |= 1u << i;
  return table_[mask];
}

std::vector<int> ExplicitTableValuation::support() const { return ground_; }

RestrictedValuation::RestrictedValuation(std::shared_ptr<const Valuation> base,
                                         std::vector<int> allowed)
    : base_(std::move(base)), allowed_(make_bundle(std::move(allowed))) {}

double RestrictedValuation::eval(const Bundle& bundle) const {
  Bundle filtered;
  std::set_intersection(bundle.begin(), bundle.end(), allowed_.begin(),
                        allowed_.end(), std::back_inserter(filtered));
  return base_->eval(filtered);
}

std::vector<int> RestrictedValuation::support() const {
  std::vector<int> base = base_->support();
  std::vector<int> out;
  std::set_intersection(base.begin(), base.end(), allowed_.begin(), allowed_.end(),
                        std::back_inserter(out));
  return out;
}

ScaledValuation::ScaledValuation(std::shared_ptr<const Valuation> base,
                                 double divisor)
    : base_(std::move(base)), divisor_(divisor) {
  if (!(divisor_ > 0.0)) throw InputError("scale divisor must be positive");
}

double ScaledValuation::eval(const Bundle& bundle) const {
  return base_->eval(bundle) / divisor_;
}

std::vector<int> ScaledValuation::support() const { return base_->support(); }

CappedValuation::CappedValuation(std::shared_ptr<const Valuation> base, double cap)
    : base_(std::move(base)), cap_(cap) {
  require_nonneg(cap, "cap");
}

double CappedValuation::eval(const Bundle& bundle) const {
  return std::min(cap_, base_->eval(bundle));
}

std::vector<int> CappedValuation::support() const {
  if (cap_ <= 0.0) return {};
  return base_->support();
}

ValuationOracle::ValuationOracle(ValuationKind kind,
                                 std::shared_ptr<const Valuation> fn)
    : kind_(kind), fn_(std::move(fn)) {}

ValuationOracle ValuationOracle::additive(std::map<int, double> values) {
  return ValuationOracle(ValuationKind::Additive,
                         std::make_shared<AdditiveValuation>(std::move(values)));
}

ValuationOracle ValuationOracle::weighted_coverage(
    std::map<int, std::vector<int>> covers, std::map<int, double> weights) {
  return ValuationOracle(ValuationKind::WeightedCoverage,
                         std::make_shared<WeightedCoverageValuation>(
                             std::move(covers), std::move(weights)));
}

ValuationOracle ValuationOracle::truncated_additive(std::map<int, double> values,
                                                    double cap) {
  return ValuationOracle(
      ValuationKind::TruncatedAdditive,
      std::make_shared<TruncatedAdditiveValuation>(std::move(values), cap));
}

ValuationOracle ValuationOracle::explicit_table(std::vector<int> ground,
                                                std::vector<double> table,
                                                bool validate) {
  return ValuationOracle(ValuationKind::ExplicitTable,
                         std::make_shared<ExplicitTableValuation>(
                             std::move(ground), std::move(table), validate));
}

double ValuationOracle::evaluate(const Bundle& bundle) const {
  if (!fn_) throw ContractError("evaluate on empty oracle");
  for (int r : bundle)
    if (r < 0) throw InputError("unknown resource id in bundle");
  counter_->fetch_add(1);
  return fn_->eval(bundle) / scale_;
}

double ValuationOracle::marginal(const Bundle& base, int r) const {
  if (std::binary_search(base.begin(), base.end(), r))
    throw InputError("marginal: resource already in base bundle");
  Bundle with = base;
  with.insert(std::upper_bound(with.begin(), with.end(), r), r);
  return evaluate(with) - evaluate(base);
}

std::shared_ptr<const Valuation> ValuationOracle::scaled_function() const {
  if (scale_ == 1.0) return fn_;
  return std::make_shared<ScaledValuation>(fn_, scale_);
}

ValuationOracle ValuationOracle::scaled(double eta) const {
  if (!(eta > 0.0)) throw InputError("scale divisor must be positive");
  ValuationOracle out = *this;
  out.scale_ = scale_ * eta;
  return out;
}

SubmodularityVerdict check_submodular(const ValuationOracle& oracle, double tol) {
  const std::vector<int> ground = oracle.support();
  if (ground.size() > 20)
    throw CapabilityError("check_submodular: ground set larger than 20");
  const int n = static_cast<int>(ground.size());
  const std::uint32_t full = n == 0 ? 0u : ((n == 32 ? 0u : (1u << n)) - 1u);

  std::vector<double> val(std::size_t(full) + 1);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    val[mask] = oracle.evaluate(mask_to_bundle(mask, ground));
    if (full == 0) break;
  }

  SubmodularityVerdict verdict;
  auto fail = [&](std::uint32_t a, std::uint32_t b, int r, const char* reason) {
    verdict.ok = false;
    verdict.violation = SubmodularityViolation{
        mask_to_bundle(a, ground), mask_to_bundle(b, ground), r, reason};
  };

  if (std::fabs(val[0]) > tol) {
    fail(0, 0, -1, "f(empty) != 0");
    return verdict;
  }
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) continue;
      const std::uint32_t with_i = mask | (1u << i);
      if (val[with_i] < val[mask] - tol) {
        fail(mask, with_i, ground[i], "not monotone");
        return verdict;
      }
      // marginal of ground[i] at `mask` vs at mask+{ground[j]}
      for (int j = 0; j < n; ++j) {
        if (j == i || (mask >> j & 1u)) continue;
        const std::uint32_t sup = mask | (1u << j);
        if (val[with_i] - val[mask] < val[sup | (1u << i)] - val[sup] - tol) {
          fail(mask, sup, ground[i], "diminishing returns violated");
          return verdict;
        }
      }
    }
    if (full == 0) break;
  }
  return verdict;
}

}  // namespace santa
