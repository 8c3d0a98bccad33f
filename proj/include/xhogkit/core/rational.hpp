#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "xhogkit/core/error.hpp"

namespace xhogkit {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline Integer pow2_int(unsigned e) {
  Integer r = 1;
  r <<= e;
  return r;
}

/// "p/q" with q > 0, always including the denominator (2 prints as "2/1").
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// H_n = 1 + 1/2 + ... + 1/n.
inline Rational harmonic_number(unsigned n) {
  Rational h = 0;
  for (unsigned i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

}  // namespace xhogkit
