#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace bftgame {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic for all analytic code paths. Equilibrium
// comparisons involve exact ties at thresholds (e.g. exactly nu-1 votes),
// so floating point is reserved for Monte-Carlo estimation only.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Lossless "p/q" rendering (plain "p" when q == 1).
std::string to_fraction_string(const Rational& r);

// Parses "p", "p/q" or a plain decimal like "3.5". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Binomial coefficient C(n, k); zero when k is out of range.
BigInt binomial(int n, int k);

}  // namespace bftgame
