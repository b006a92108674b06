#include "sigdose/medorder.hpp"

#include <cctype>

#include "sigdose/tokenizer.hpp"

namespace sigdose {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

class StrengthScanner {
 public:
  explicit StrengthScanner(std::string_view text) : text_(text) {}

  void skip_spaces() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  void advance() { ++pos_; }

  std::optional<Rational> number() {
    std::size_t start = pos_;
    while (!done() && (is_digit(peek()) || peek() == ',' || peek() == '.')) ++pos_;
    if (start == pos_) return std::nullopt;
    auto v = parse_rational(text_.substr(start, pos_ - start));
    if (!v) pos_ = start;
    return v;
  }

  std::string word() {
    std::size_t start = pos_;
    while (!done() && is_alpha(peek())) ++pos_;
    return to_lower(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

const UnitNorm* lookup_unit(std::string_view unit, const Lexicon& lexicon) {
  const LexiconEntry* e = lexicon.find(unit, BasicEntityType::Units);
  return e ? &std::get<UnitNorm>(e->normalization) : nullptr;
}

std::string canonical_of(std::string_view text, const Lexicon& lexicon, BasicEntityType type) {
  auto tokens = tokenize(text);
  std::vector<std::string> keys;
  for (auto& t : tokens) keys.push_back(t.key);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto match = lexicon.lookup_longest(keys, i);
    if (!match) continue;
    for (const LexiconEntry* e : match->candidates) {
      if (e->type != type) continue;
      if (type == BasicEntityType::Form) return std::get<FormNorm>(e->normalization).form;
      if (type == BasicEntityType::Route) return std::get<RouteNorm>(e->normalization).route;
    }
  }
  return {};
}

}  // namespace

std::pair<Rational, std::string> canonicalize_unit(const Rational& amount, std::string_view unit,
                                                   const Lexicon& lexicon) {
  const UnitNorm* norm = lookup_unit(unit, lexicon);
  if (!norm) throw StrengthError(StrengthError::Kind::UnknownUnit, "unknown unit '" + std::string(unit) + "'");
  return {amount * norm->scale, norm->unit};
}

Strength parse_strength(std::string_view text, const Lexicon& lexicon) {
  auto fail = [&](const std::string& why) -> StrengthError {
    return StrengthError(StrengthError::Kind::Unparseable,
                         "cannot parse strength '" + std::string(text) + "': " + why);
  };

  StrengthScanner s(text);
  std::vector<std::pair<Rational, std::string>> raw;
  while (true) {
    s.skip_spaces();
    auto amount = s.number();
    if (!amount) throw fail("expected an amount");
    s.skip_spaces();
    std::string unit = s.word();
    raw.emplace_back(*amount, unit);
    s.skip_spaces();
    if (s.peek() == '-') {
      s.advance();
      continue;
    }
    break;
  }

  std::optional<std::string> denominator;
  if (s.peek() == '/') {
    s.advance();
    s.skip_spaces();
    std::string denom;
    if (auto n = s.number()) {
      denom = to_string(*n);
      s.skip_spaces();
    }
    std::string unit = s.word();
    if (unit.empty()) throw fail("expected a denominator unit");
    denominator = denom.empty() ? unit : denom + " " + unit;
  }

  // a unit written once at the end applies to every amount before it
  std::string carry;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    if (it->second.empty()) {
      it->second = carry;
    } else {
      carry = it->second;
    }
  }

  Strength strength;
  for (auto& [amount, unit] : raw) {
    if (unit.empty()) throw fail("missing unit");
    if (amount <= 0) throw fail("amount must be positive");
    auto [scaled, canonical] = canonicalize_unit(amount, unit, lexicon);
    strength.ingredients.push_back({scaled, canonical, denominator});
  }
  return strength;
}

std::string format_strength(const Strength& strength) {
  std::string out;
  bool shared_unit = true;
  for (const auto& ing : strength.ingredients) {
    shared_unit = shared_unit && ing.unit == strength.ingredients.front().unit;
  }
  for (std::size_t i = 0; i < strength.ingredients.size(); ++i) {
    const auto& ing = strength.ingredients[i];
    if (i) out += "-";
    out += to_string(ing.amount);
    if (!shared_unit || i + 1 == strength.ingredients.size()) out += " " + ing.unit;
  }
  if (!strength.ingredients.empty() && strength.ingredients.front().denominator) {
    out += "/" + *strength.ingredients.front().denominator;
  }
  return out;
}

std::string canonical_route(std::string_view text, const Lexicon& lexicon) {
  return canonical_of(text, lexicon, BasicEntityType::Route);
}

std::string canonical_form(std::string_view text, const Lexicon& lexicon) {
  return canonical_of(text, lexicon, BasicEntityType::Form);
}

}  // namespace sigdose
