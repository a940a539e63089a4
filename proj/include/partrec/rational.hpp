#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace partrec {

/// Arbitrary-precision rational used wherever a probability is a finite
/// combination of reciprocals of integers.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" with q >= 1, always in lowest terms.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double value);

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

}  // namespace partrec
