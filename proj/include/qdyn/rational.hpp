#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qdyn {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q", "-7", "0.125" or "1e-3" into an exact rational. Decimal
// strings are converted digit by digit, never through a double.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer floor_div(const Rational& r);
Integer ceil_div(const Rational& r);

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Smallest integer k >= 0 with k*k >= n.
Integer isqrt_ceil(const Integer& n);

}  // namespace qdyn
