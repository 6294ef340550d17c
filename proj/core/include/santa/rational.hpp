#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "santa/errors.hpp"

namespace santa {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("rat_from_double: non-finite value");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mant);
  if (exp >= 0) {
    r *= Rat(BigInt(1) << exp);
  } else {
    r /= Rat(BigInt(1) << (-exp));
  }
  return r;
}

inline BigInt rat_floor(const Rat& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt quo = n / d;
  if (n < 0 && quo * d != n) quo -= 1;
  return quo;
}

inline BigInt rat_ceil(const Rat& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt quo = n / d;
  if (n > 0 && quo * d != n) quo += 1;
  return quo;
}

using RatVec = std::vector<Rat>;

}  // namespace santa
