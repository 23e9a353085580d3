#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace flowtime {

/// Exact arbitrary-precision rational; the scalar type for every quantity in
/// the library. Always kept in lowest terms with a positive denominator.
/// Division by zero throws std::overflow_error. Expression templates are off
/// so arithmetic composes with std::min/max and plain value semantics.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer =
    boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

/// Parses "p" or "p/q" with optional leading '-'. The denominator must be a
/// positive integer literal. Throws std::invalid_argument on malformed input
/// (including "p/0").
Rational parse_rational(const std::string& text);

/// Non-throwing variant of parse_rational.
std::optional<Rational> try_parse_rational(const std::string& text);

/// Serializes as "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

}  // namespace flowtime
