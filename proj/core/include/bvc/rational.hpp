#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace bvc {

// All probability masses, covariances and LP coefficients are exact
// rationals; nothing in the core ever rounds.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Parses "p/q" or a bare integer "p". The result is stored in lowest terms
// with positive denominator. Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

// Canonical form: "p/q" in lowest terms, bare "p" when the denominator is 1.
std::string to_string(const Rational& value);

// Exact: every finite double is a dyadic rational.
Rational rational_from_double(double x);

// Closest rational to x with denominator <= max_den, via continued-fraction
// convergents and semiconvergents. Ties resolve to the smaller denominator.
Rational round_to_denominator(const Rational& x, const BigInt& max_den);
Rational round_to_denominator(double x, std::uint64_t max_den);

}  // namespace bvc
