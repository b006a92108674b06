#include "sigdose/rational.hpp"

#include <algorithm>
#include <cctype>

namespace sigdose {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Accepts digit groups separated by commas only when every group after the
// first has exactly three digits.
std::optional<std::string> strip_thousands(std::string_view s) {
  if (s.find(',') == std::string_view::npos) return std::string(s);
  std::string out;
  std::size_t group = 0;
  bool first = true;
  for (char c : s) {
    if (c == ',') {
      if ((first && group == 0) || (!first && group != 3)) return std::nullopt;
      first = false;
      group = 0;
      continue;
    }
    out.push_back(c);
    ++group;
  }
  if (!first && group != 3) return std::nullopt;
  return out;
}

std::optional<Rational> parse_decimal(std::string_view s) {
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  if (whole.empty() && frac.empty()) return std::nullopt;
  auto plain = strip_thousands(whole);
  if (!plain) return std::nullopt;
  if (!plain->empty() && !all_digits(*plain)) return std::nullopt;
  if (!frac.empty() && !all_digits(frac)) return std::nullopt;

  // cpp_int reads a leading 0 as an octal prefix
  std::string digits = *plain + std::string(frac);
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  cpp_int numerator(digits.empty() ? std::string("0") : digits);
  cpp_int denominator = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac.size()));
  return Rational(numerator, denominator);
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty() || text.size() > 32) return std::nullopt;
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  auto num = parse_decimal(text.substr(0, slash));
  auto den = parse_decimal(text.substr(slash + 1));
  if (!num || !den || *den == 0) return std::nullopt;
  return *num / *den;
}

std::string to_string(const Rational& value) {
  cpp_int num = boost::multiprecision::numerator(value);
  cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  cpp_int rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return num.str() + "/" + den.str();

  unsigned places = std::max(twos, fives);
  cpp_int scaled = num * (boost::multiprecision::pow(cpp_int(10), places) / den);
  bool negative = scaled < 0;
  std::string digits = (negative ? cpp_int(-scaled) : scaled).str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace sigdose
