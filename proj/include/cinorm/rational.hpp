#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cinorm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Always "p/q", including "n/1" for integers.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

/// Accepts "p/q" or a bare integer.
Rational parse_rational(std::string_view text);

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace cinorm
