#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace linform {

/// Arbitrary-precision rational; always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Parses "p/q", integers, and decimal literals ("1.25", "-3e-2") exactly.
/// Decimal literals are converted by their digits, not via binary floating point.
Rational parse_rational(std::string_view text);

/// Exact value of a double (every finite double is a dyadic rational).
Rational rational_from_double(double value);

/// Shortest decimal string that round-trips to the same double.
std::string shortest_decimal(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace linform
