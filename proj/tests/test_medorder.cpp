#include <doctest.h>

#include "sigdose/medorder.hpp"

using namespace sigdose;

TEST_CASE("parse_strength") {
  const auto& lex = default_lexicon();
  auto s = parse_strength("50mg", lex);
  REQUIRE(s.ingredients.size() == 1);
  CHECK(s.ingredients[0].amount == 50);
  CHECK(s.ingredients[0].unit == "mg");

  s = parse_strength("250-50 mcg/dose", lex);
  REQUIRE(s.ingredients.size() == 2);
  CHECK(s.ingredients[0].amount == 250);
  CHECK(s.ingredients[1].amount == 50);
  CHECK(s.ingredients[0].unit == "mcg");
  CHECK(s.ingredients[1].unit == "mcg");
  CHECK(s.ingredients[0].denominator == std::optional<std::string>{"dose"});

  s = parse_strength("300 MG-30 MG TABLET", lex);
  REQUIRE(s.ingredients.size() == 2);
  CHECK(s.ingredients[0].amount == 300);
  CHECK(s.ingredients[1].amount == 30);

  s = parse_strength("7.5 mg", lex);
  CHECK(s.ingredients[0].amount == Rational(15, 2));

  s = parse_strength("1 g", lex);
  CHECK(s.ingredients[0].amount == 1000);
  CHECK(s.ingredients[0].unit == "mg");
}

TEST_CASE("parse_strength errors") {
  const auto& lex = default_lexicon();
  CHECK_THROWS_AS(parse_strength("", lex), StrengthError);
  CHECK_THROWS_AS(parse_strength("strong", lex), StrengthError);
  try {
    parse_strength("5 zorkmids", lex);
    FAIL("expected StrengthError");
  } catch (const StrengthError& e) {
    CHECK(e.kind() == StrengthError::Kind::UnknownUnit);
  }
}

TEST_CASE("canonicalize_unit") {
  const auto& lex = default_lexicon();
  CHECK(canonicalize_unit(1, "g", lex) == std::pair<Rational, std::string>{1000, "mg"});
  CHECK(canonicalize_unit(5, "mg", lex) == std::pair<Rational, std::string>{5, "mg"});
  CHECK(canonicalize_unit(2, "teaspoon", lex) == std::pair<Rational, std::string>{10, "ml"});
  CHECK(canonicalize_unit(1, "tbsp", lex) == std::pair<Rational, std::string>{15, "ml"});
  CHECK(canonicalize_unit(3, "mcg", lex) == std::pair<Rational, std::string>{3, "mcg"});
  CHECK_THROWS_AS(canonicalize_unit(1, "furlong", lex), StrengthError);
}

TEST_CASE("canonicalization is multiplicative") {
  const auto& lex = default_lexicon();
  for (const char* unit : {"g", "mg", "mcg", "ml", "teaspoon", "liter"}) {
    for (int k : {2, 3, 10}) {
      auto base = canonicalize_unit(Rational(7, 2), unit, lex);
      auto scaled = canonicalize_unit(Rational(7, 2) * k, unit, lex);
      CHECK(scaled.first == base.first * k);
      CHECK(scaled.second == base.second);
    }
  }
}

TEST_CASE("format and parse round-trip") {
  const auto& lex = default_lexicon();
  for (const char* text : {"50mg", "250-50 mcg/dose", "300 MG-30 MG", "7.5 mg", "250 mg/5 ml", "1 g", "100 unit/ml"}) {
    auto s = parse_strength(text, lex);
    CHECK(parse_strength(format_strength(s), lex) == s);
  }
}

TEST_CASE("ingredient count follows hyphenation") {
  const auto& lex = default_lexicon();
  CHECK(parse_strength("10-20 mg", lex).ingredients.size() == 2);
  CHECK(parse_strength("10 mg", lex).ingredients.size() == 1);
}

TEST_CASE("canonical route and form") {
  const auto& lex = default_lexicon();
  CHECK(canonical_route("PO", lex) == "oral");
  CHECK(canonical_route("", lex).empty());
  CHECK(canonical_form("Tablet", lex) == "tablet");
  CHECK(canonical_form("cream", lex) == "cream");
}
