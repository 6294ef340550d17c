#include "santa/multilinear.hpp"

#include <cmath>

#include "santa/rng.hpp"

namespace santa {

SubsetTable::SubsetTable(const ValuationOracle& f, std::vector<int> ground)
    : ground_(std::move(ground)) {
  if (ground_.size() > 20) throw CapabilityError("SubsetTable: ground set above 20");
  table_.resize(std::size_t(1) << ground_.size());
  for (std::uint32_t mask = 0; mask < table_.size(); ++mask) {
    Bundle b;
    for (std::size_t i = 0; i < ground_.size(); ++i)
      if (mask >> i & 1u) b.push_back(ground_[i]);
    table_[mask] = f.evaluate(make_bundle(std::move(b)));
  }
}

double multilinear_exact(const SubsetTable& table, const std::vector<double>& x) {
  const int n = table.size();
  if (n > 16) throw CapabilityError("multilinear_exact: ground set above 16");
  if (static_cast<int>(x.size()) != n)
    throw InputError("multilinear_exact: dimension mismatch");
  double total = 0.0;
  const std::uint32_t full = (n == 0) ? 0u : ((1u << n) - 1u);
  for (std::uint32_t mask = 0;; ++mask) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= (mask >> i & 1u) ? x[i] : (1.0 - x[i]);
    total += p * table.value(mask);
    if (mask == full) break;
  }
  return total;
}

namespace {

constexpr int kBatch = 256;

template <class Eval>
double estimate_impl(int n, const std::vector<double>& x, int samples,
                     std::uint64_t seed, const Eval& eval) {
  if (static_cast<int>(x.size()) != n)
    throw InputError("multilinear_estimate: dimension mismatch");
  for (double xi : x)
    if (xi < -1e-12 || xi > 1.0 + 1e-12)
      throw InputError("multilinear_estimate: x outside [0,1]");
  if (samples <= 0) throw InputError("multilinear_estimate: samples must be positive");

  double sum = 0.0;
  int done = 0;
  for (int batch = 0; done < samples; ++batch) {
    auto rng = make_rng(seed, 0x6d6c6573ULL, batch);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int here = std::min(kBatch, samples - done);
    for (int s = 0; s < here; ++s) {
      std::uint32_t mask = 0;
      for (int i = 0; i < n; ++i)
        if (unif(rng) < x[i]) mask |= 1u << i;
      sum += eval(mask);
    }
    done += here;
  }
  return sum / samples;
}

}  // namespace

double multilinear_estimate(const ValuationOracle& f, const std::vector<int>& ground,
                            const std::vector<double>& x, int samples,
                            std::uint64_t seed) {
  const int n = static_cast<int>(ground.size());
  if (n > 30) throw CapabilityError("multilinear_estimate: ground set above 30");
  return estimate_impl(n, x, samples, seed, [&](std::uint32_t mask) {
    Bundle b;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) b.push_back(ground[i]);
    return f.evaluate(make_bundle(std::move(b)));
  });
}

double multilinear_estimate(const SubsetTable& table, const std::vector<double>& x,
                            int samples, std::uint64_t seed) {
  return estimate_impl(table.size(), x, samples, seed,
                       [&](std::uint32_t mask) { return table.value(mask); });
}

}  // namespace santa
