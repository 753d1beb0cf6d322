#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace schedlift {

// Every quantity that feeds a feasibility decision is kept exact; doubles
// appear nowhere in the solve paths.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Canonical rendering: "p" when the denominator is 1, otherwise "p/q" with
// q > 0 and gcd(p, q) = 1.
std::string rational_to_string(const Rational& value);

// Accepts "p" or "p/q", optional leading '-'. Rejects zero denominators and
// any other malformed input.
std::optional<Rational> rational_from_string(const std::string& text);

long long rational_floor(const Rational& value);
long long rational_ceil(const Rational& value);

}  // namespace schedlift
