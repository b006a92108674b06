#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "sigdose/rational.hpp"

namespace sigdose {

enum class BasicEntityType { NumericalValue, Form, Units, Route, Frequency, FrequencyMod };

std::string_view to_string(BasicEntityType type);
std::optional<BasicEntityType> parse_entity_type(std::string_view name);

struct NumericNorm {
  Rational min;
  Rational max;
};

struct FormNorm {
  std::string form;
};

/// `scale` converts one of the surface unit into the canonical unit
/// (g -> mg has scale 1000).
struct UnitNorm {
  std::string unit;
  Rational scale;
};

struct RouteNorm {
  std::string route;
};

/// A frequency token covers `implicit_count` administrations every
/// `period_days`. Hour-interval patterns produce a period range; lexicon
/// rows always have period_min == period_max. `slot` names a time-of-day
/// slot ("morning", "bedtime") and is empty for plain frequencies.
struct FrequencyNorm {
  Rational period_min;
  Rational period_max;
  Rational implicit_count{1};
  std::string slot;
};

struct FrequencyModNorm {
  Rational multiplier;
};

using Normalization =
    std::variant<NumericNorm, FormNorm, UnitNorm, RouteNorm, FrequencyNorm, FrequencyModNorm>;

/// Variant alternatives are declared in BasicEntityType order.
inline BasicEntityType type_of(const Normalization& n) {
  return static_cast<BasicEntityType>(n.index());
}

struct LexiconEntry {
  std::vector<std::string> surface;  // lowercase token keys
  BasicEntityType type = BasicEntityType::NumericalValue;
  Normalization normalization;

  std::string surface_text() const;
};

/// Result of a longest-match lookup. Every candidate matched exactly
/// `length` tokens; there is at most one candidate per entity type.
struct LexiconMatch {
  std::size_t length = 0;
  std::vector<const LexiconEntry*> candidates;
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::size_t line, const std::string& what)
      : std::runtime_error("lexicon line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Immutable after loading; lookups are safe from multiple threads.
class Lexicon {
 public:
  /// Throws std::invalid_argument on an empty surface or a duplicate
  /// (surface, type) pair.
  void add(LexiconEntry entry);

  std::optional<LexiconMatch> lookup_longest(std::span<const std::string> keys,
                                             std::size_t start) const;

  const LexiconEntry* find(std::string_view surface, BasicEntityType type) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t count(BasicEntityType type) const;
  const std::deque<LexiconEntry>& entries() const noexcept { return entries_; }

 private:
  std::deque<LexiconEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::size_t max_surface_length_ = 0;
};

/// Parses the tab-separated lexicon format: `surface<TAB>type<TAB>norm`.
/// Blank lines and lines starting with '#' are ignored. Throws LexiconError.
Lexicon load_lexicon(std::string_view source);
Lexicon load_lexicon_file(const std::filesystem::path& path);

/// Built-in lexicon shipped with the library.
std::string_view default_lexicon_source();
const Lexicon& default_lexicon();

/// Recognizes literal numbers ("7", "0.25", "1/2"), hyphen ranges ("1-2"),
/// and parenthesized restatements ("(1.5)", "one(1)"). Returns (min, max).
std::optional<std::pair<Rational, Rational>> parse_numeric_token(std::string_view token);

}  // namespace sigdose
