#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "optwist/errors.hpp"

namespace optwist {

// Exact arbitrary-precision rationals. cpp_rational keeps values in lowest
// terms with a positive denominator, which is exactly the invariant we need.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational(long num, long den = 1) { return Rational(num, den); }

// Serialized form is "p" or "p/q" with q > 0.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den <= 0) throw InputError("rational denominator must be positive: " + s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw InputError("bad rational literal: " + s);
  }
}

// Pivot-size heuristic for elimination: smaller means cheaper arithmetic.
inline size_t rational_weight(const Rational& r) {
  return msb(abs(numerator(r)) + 1) + msb(denominator(r));
}

}  // namespace optwist
