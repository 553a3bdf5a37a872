#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace sympflow {

using BigInt = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational. All symbolic work in the library is
/// carried out over this type; doubles appear only at the numeric boundary.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3/4", "-2", "0.25", "1e-3". Fractions must have integer parts;
/// decimals (optionally with an exponent) convert exactly.
Rational parse_rational(std::string_view text);

/// Canonical form: "n" or "n/d" with d > 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact square root when the value is a perfect rational square, else empty.
std::optional<Rational> exact_sqrt(const Rational& r);

}  // namespace sympflow
