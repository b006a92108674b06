#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sigdose {

/// Exact arbitrary-precision rational. All dosage arithmetic is done in this
/// type so that scoring can use exact equality.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "0.25", ".5", "1/2", "1,000". Returns nullopt for anything
/// else, including a zero denominator and inputs longer than 32 characters.
std::optional<Rational> parse_rational(std::string_view text);

/// Terminating decimals print as decimals ("7.5"), everything else as a
/// reduced fraction ("1/3").
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace sigdose
