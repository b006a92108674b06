#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sigdose/lexicon.hpp"
#include "sigdose/rational.hpp"

namespace sigdose {

/// Structured fields that accompany a Sig. Only `sig` is required; real
/// orders routinely leave the others blank.
struct MedicationOrder {
  std::string order_id;
  std::string sig;
  std::string strength_text;
  std::string route;
  std::string form;
};

struct IngredientStrength {
  Rational amount;
  std::string unit;                        // canonical unit
  std::optional<std::string> denominator;  // "dose", "ml", "5 ml"

  bool operator==(const IngredientStrength&) const = default;
};

/// Ingredients in the order they appear in the strength text.
struct Strength {
  std::vector<IngredientStrength> ingredients;

  bool operator==(const Strength&) const = default;
};

class StrengthError : public std::runtime_error {
 public:
  enum class Kind { Unparseable, UnknownUnit };

  StrengthError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Accepts "50mg", "7.5 mg", "250-50 mcg/dose", "300 MG-30 MG", "250 mg/5 ml".
/// A shared trailing unit applies to every amount before it. Text after the
/// last amount (e.g. a trailing "TABLET") is ignored. Throws StrengthError.
Strength parse_strength(std::string_view text, const Lexicon& lexicon);

/// Inverse of parse_strength for the canonical form.
std::string format_strength(const Strength& strength);

/// Scales `amount` of `unit` into the unit's canonical unit. Throws
/// StrengthError(UnknownUnit) when the lexicon has no such unit.
std::pair<Rational, std::string> canonicalize_unit(const Rational& amount, std::string_view unit,
                                                   const Lexicon& lexicon);

/// Canonical route/form names for the order's free-text fields, or empty.
std::string canonical_route(std::string_view text, const Lexicon& lexicon);
std::string canonical_form(std::string_view text, const Lexicon& lexicon);

}  // namespace sigdose
