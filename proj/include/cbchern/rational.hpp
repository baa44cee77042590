#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cbchern {

/// Exact rational scalar. Every coefficient in the library is one of these.
using Rational = mpq_class;

/// Canonical "p/q" text (q omitted when it is 1).
std::string to_string(const Rational& q);

/// Parses "p", "-p" or "p/q"; throws ParseError on malformed input or q = 0.
Rational parse_rational(std::string_view text);

Rational factorial(int k);
Rational binomial(int n, int k);

}  // namespace cbchern
