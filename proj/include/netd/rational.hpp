#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace netd {

// All costs, times and delay values are exact rationals. Floating point
// appears only when a report is rendered for humans.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e for any integer e, including negative exponents.
Rational pow2(int e);

// Largest f with 2^f <= x. Requires x > 0.
int floor_log2(const Rational& x);

// Canonical "p/q" with q >= 1 and gcd(p, q) = 1. Round-trips exactly.
std::string to_fraction(const Rational& x);

// Accepts "p/q" or a bare integer "p".
Rational parse_fraction(const std::string& text);

double to_double(const Rational& x);

}  // namespace netd
