#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sigdose/lexicon.hpp"
#include "sigdose/rational.hpp"
#include "sigdose/tokenizer.hpp"

namespace sigdose {

/// Half-open byte range [start, end) into a Sig, with the covered text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  static Span of(std::string_view sig, std::size_t start, std::size_t end) {
    return {start, end, std::string(sig.substr(start, end - start))};
  }
  bool contains(const Span& other) const { return start <= other.start && other.end <= end; }
  bool operator==(const Span&) const = default;
};

struct BasicEntity {
  Span span;
  BasicEntityType type = BasicEntityType::NumericalValue;
  Normalization normalization;
  std::size_t token_begin = 0;  // [token_begin, token_end) in ExtractionResult::tokens
  std::size_t token_end = 0;
  std::string surface;          // lexicon surface or numeric literal that matched
};

enum class CompoundKind { DosagePerAdministration, AdministrationFrequency, DosageExpression };

std::string_view to_string(CompoundKind kind);

/// For DA and AF, `parts` index ExtractionResult::basics. For a DE, `parts`
/// is {index into das, index into afs}.
struct CompoundEntity {
  CompoundKind kind = CompoundKind::DosagePerAdministration;
  Span span;
  std::vector<std::size_t> parts;
  bool unit_based = false;                // DA only: quantity is an amount, not a form count
  std::optional<std::size_t> duration;    // DE only: index into ExtractionResult::durations
};

/// Daily cap such as "max = 6 tabs/day" or "do not exceed 30 mg per day".
struct DailyCap {
  Span span;
  Rational amount;
  /// Canonical Units name when the cap is an amount; empty when it counts
  /// forms or doses.
  std::string unit;
};

/// "for 7 days", "x 5 days". Metadata only; never changes the daily rate.
struct Duration {
  Span span;
  Rational days_min;
  Rational days_max;
};

enum class MarkerKind {
  AsNeeded,          // prn
  AsDirected,        // instructions live elsewhere
  OneTime,           // single administration
  NonRoutine,        // only under a specific circumstance
  DayIndexed,        // "day 1", "weeks 1-4"
  WeekdayList,       // two or more named weekdays
  Alternating,       // "alternates 5 mg and 7.5 mg"
  Taper,             // "taper", "then decrease"
};

std::string_view to_string(MarkerKind kind);

struct Marker {
  MarkerKind kind = MarkerKind::AsNeeded;
  Span span;
};

struct ExtractionResult {
  std::string sig;
  std::vector<Token> tokens;
  std::vector<BasicEntity> basics;
  std::vector<CompoundEntity> das;
  std::vector<CompoundEntity> afs;
  std::vector<CompoundEntity> des;
  std::vector<std::size_t> unpaired_das;  // indices into das
  std::vector<std::size_t> unpaired_afs;  // indices into afs
  std::vector<DailyCap> caps;
  std::vector<Duration> durations;
  std::vector<Marker> markers;
  std::vector<std::string> diagnostics;

  bool has_marker(MarkerKind kind) const;
};

// ---------------------------------------------------------------------------
// Rule-based extraction, one stage per function. `extract` runs them all.

/// Tokens, caps, durations, markers and basic entities. Basic entities are
/// sorted by start offset and never overlap.
ExtractionResult scan_basic(std::string_view sig, const Lexicon& lexicon);

/// Convenience wrapper returning only the basic entities.
std::vector<BasicEntity> extract_basic(std::string_view sig, const Lexicon& lexicon);

/// DA patterns: NumericalValue + ?Form + ?Route and NumericalValue + Unit + ?Route.
std::vector<CompoundEntity> assemble_da(const ExtractionResult& scanned);

/// AF pattern: ?FrequencyMod + ?NumericalValue + Frequency (either modifier order).
std::vector<CompoundEntity> assemble_af(const ExtractionResult& scanned);

struct Pairing {
  std::vector<CompoundEntity> des;
  std::vector<std::size_t> unpaired_das;
  std::vector<std::size_t> unpaired_afs;
};

/// Pairs each DA with the nearest following unused AF that starts before
/// the next DA.
Pairing pair_des(std::string_view sig, std::span<const CompoundEntity> das,
                 std::span<const CompoundEntity> afs);

/// Full rule-based pipeline.
ExtractionResult extract(std::string_view sig, const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// External extractor seam.

enum class ExternalLabel { Dosage, Strength, Form, Frequency, Route, Duration, Drug };

std::optional<ExternalLabel> parse_external_label(std::string_view name);
std::string_view to_string(ExternalLabel label);

struct ExternalEntity {
  ExternalLabel label = ExternalLabel::Dosage;
  std::size_t start = 0;
  std::size_t end = 0;
};

class ExternalContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Builds compound entities from externally predicted spans: adjacent
/// Dosage/Strength + Form (+ Route) spans become a DA, each Frequency span
/// becomes an AF, and basic entities are re-extracted inside each compound
/// span. Caps, durations and markers come from the same text rules as the
/// rule-based path. Throws ExternalContractError on out-of-range or
/// overlapping same-label spans.
ExtractionResult external_entities_to_compound(std::string_view sig,
                                               std::span<const ExternalEntity> entities,
                                               const Lexicon& lexicon);

}  // namespace sigdose
