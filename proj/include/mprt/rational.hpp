#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mprt {

using Rational = boost::multiprecision::cpp_rational;

/// Canonical text form: "p" for integers, "p/q" otherwise (q > 0).
std::string to_string(const Rational& value);

/// Parses "p" or "p/q" with an optional leading sign. Throws InputError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

}  // namespace mprt
