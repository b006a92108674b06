#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigdose/extraction.hpp"

namespace sigdose::detail {

/// A numeric quantity read at a token position: a literal, a lexicon number
/// word, optionally followed by a parenthesized restatement and a range tail
/// ("to two", "- 2", "or 2").
struct Quantity {
  Rational min;
  Rational max;
  std::size_t length = 0;  // tokens consumed
  std::string surface;
};

std::vector<std::string> token_keys(const std::vector<Token>& tokens);

std::optional<Quantity> read_quantity(const std::vector<Token>& tokens,
                                      const std::vector<std::string>& keys, std::size_t i,
                                      const Lexicon& lexicon, bool allow_range = true);

/// Caps, durations, markers, plus a per-token mask of tokens consumed by
/// caps, durations and day-index phrases. Basic entities never start on a
/// masked token.
struct Modifiers {
  std::vector<DailyCap> caps;
  std::vector<Duration> durations;
  std::vector<Marker> markers;
  std::vector<bool> masked;
};

Modifiers detect_modifiers(std::string_view sig, const std::vector<Token>& tokens,
                           const Lexicon& lexicon);

/// Tokens that end a clause for pattern assembly.
bool is_break_token(const Token& token);

/// Tokens between two entities that turn a following NumericalValue into a
/// frequency multiplier ("2 times daily", "3 x daily").
bool is_multiplier_filler(const Token& token);

}  // namespace sigdose::detail

namespace sigdose::detail {

/// Pairs DAs with AFs and attaches durations to the resulting DEs.
void finish_compounds(ExtractionResult& r);

}  // namespace sigdose::detail
