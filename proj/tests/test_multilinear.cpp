#include <doctest.h>

#include "santa/multilinear.hpp"
#include "support/test_util.hpp"

using namespace santa;

TEST_CASE("additive oracles give the weighted sum exactly") {
  ValuationOracle f = ValuationOracle::additive({{0, 0.5}, {1, 0.8}, {2, 0.1}});
  SubsetTable table(f, {0, 1, 2});
  std::vector<double> x{0.3, 0.9, 0.5};
  CHECK(multilinear_exact(table, x) ==
        doctest::Approx(0.3 * 0.5 + 0.9 * 0.8 + 0.5 * 0.1));
}

TEST_CASE("corner points evaluate to f(empty) and f(ground)") {
  std::mt19937_64 rng(1);
  for (int kind = 0; kind < 4; ++kind) {
    ValuationOracle f = testutil::random_oracle(rng, kind, 5);
    SubsetTable table(f, {0, 1, 2, 3, 4});
    std::vector<double> zero(5, 0.0), one(5, 1.0);
    CHECK(multilinear_exact(table, zero) == doctest::Approx(0.0));
    CHECK(multilinear_exact(table, one) ==
          doctest::Approx(f.evaluate({0, 1, 2, 3, 4})));
  }
}

TEST_CASE("truncated pair at 0.5/0.5 enumerates to 0.65") {
  // f = min(1, 0.8|S|): subset enumeration at x = (0.5, 0.5):
  // 0.25*(f(empty) + f({a}) + f({b}) + f({a,b})) = 0.25*(0 + .8 + .8 + 1),
  // equivalently 0.5*0.8 + 0.5*0.8 - 0.25*0.6.
  ValuationOracle f = ValuationOracle::truncated_additive({{0, 0.8}, {1, 0.8}}, 1.0);
  SubsetTable table(f, {0, 1});
  std::vector<double> x{0.5, 0.5};
  const double hand = 0.25 * (0.0 + 0.8 + 0.8 + 1.0);
  CHECK(hand == doctest::Approx(0.5 * 0.8 + 0.5 * 0.8 - 0.25 * 0.6));
  CHECK(multilinear_exact(table, x) == doctest::Approx(hand));
}

TEST_CASE("estimator is close to the exact value with practical samples") {
  std::mt19937_64 rng(5);
  int good = 0, runs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 9);  // up to 12
    ValuationOracle f = testutil::random_oracle(rng, trial, n);
    std::vector<int> ground(n);
    for (int i = 0; i < n; ++i) ground[i] = i;
    SubsetTable table(f, ground);
    std::vector<double> x(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n; ++i) x[i] = unit(rng);
    const double exact = multilinear_exact(table, x);
    const double est = multilinear_estimate(table, x, 2000, 1000 + trial);
    const double scale = table.full_value();
    ++runs;
    if (std::abs(est - exact) <= 0.02 * std::max(scale, 1e-9)) ++good;
  }
  CHECK(good >= 48);  // 95% of trials within 2% of f(ground)
  CHECK(runs == 50);
}

TEST_CASE("estimator is deterministic for a fixed seed and batch layout") {
  ValuationOracle f = ValuationOracle::additive({{0, 1.0}, {1, 2.0}});
  std::vector<double> x{0.5, 0.25};
  const double a = multilinear_estimate(f, {0, 1}, x, 700, 42);
  const double b = multilinear_estimate(f, {0, 1}, x, 700, 42);
  CHECK(a == b);
}

TEST_CASE("exact mode is monotone and concave along coordinates") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 4);
    ValuationOracle f = testutil::random_oracle(rng, trial, n);
    std::vector<int> ground(n);
    for (int i = 0; i < n; ++i) ground[i] = i;
    SubsetTable table(f, ground);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = unit(rng) * 0.8;
    for (int j = 0; j < n; ++j) {
      // finite differences along coordinate j
      auto at = [&](double xj) {
        std::vector<double> y = x;
        y[j] = xj;
        return multilinear_exact(table, y);
      };
      const double d1 = at(x[j] + 0.1) - at(x[j]);
      const double d2 = at(x[j] + 0.2) - at(x[j] + 0.1);
      CHECK(d1 >= -1e-9);        // monotone
      CHECK(d2 <= d1 + 1e-9);    // concave along coordinates
    }
  }
}

TEST_CASE("estimates are unbiased across seeds") {
  ValuationOracle f = ValuationOracle::truncated_additive(
      {{0, 0.6}, {1, 0.6}, {2, 0.6}}, 1.0);
  SubsetTable table(f, {0, 1, 2});
  std::vector<double> x{0.5, 0.4, 0.7};
  const double exact = multilinear_exact(table, x);
  double mean = 0.0;
  const int reps = 200;
  for (int s = 0; s < reps; ++s) mean += multilinear_estimate(table, x, 64, s);
  mean /= reps;
  CHECK(mean == doctest::Approx(exact).epsilon(0.02));
}
