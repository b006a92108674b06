#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigdose/extraction.hpp"
#include "sigdose/lexicon.hpp"
#include "sigdose/medorder.hpp"
#include "sigdose/rational.hpp"

namespace sigdose {

enum class ReasonCode {
  NeedMoreInfo_Uninformative,
  NeedMoreInfo_MissingFrequency,
  NeedMoreInfo_MissingDose,
  NeedMoreInfo_Conflicting,
  VariableDoseOverDays,
  NotMeaningful_NonRoutine,
  NotMeaningful_OneTime,
  SubWeeklyFrequency,
  UnquantifiableForm,
  StrengthUnavailable,
  ParseFailure,
};

std::string_view to_string(ReasonCode code);
std::optional<ReasonCode> parse_reason_code(std::string_view name);

/// One dosage expression reduced to numbers. DA quantities are form counts,
/// or amounts in `da_unit` when `da_is_unit_based`.
struct NormalizedDE {
  Rational da_min;
  Rational da_max;
  bool da_is_unit_based = false;
  std::string da_unit;
  std::string form;  // canonical form of a count-based DA, may be empty
  Rational af_per_day_min;
  Rational af_per_day_max;
  Rational period_days;  // longest period of the frequency
  std::string slot;      // time-of-day slot, empty when none
  bool conjoined = false;  // joined to the previous DE by "and"
  Span span;
};

bool same_value(const NormalizedDE& a, const NormalizedDE& b);

/// Administrations per day implied by an AF.
struct FrequencyRate {
  Rational per_day_min;
  Rational per_day_max;
  Rational period_days;
  std::string slot;
  bool slot_only = false;  // only names a time of day ("morning")
};

FrequencyRate normalize_af(const ExtractionResult& extraction, const CompoundEntity& af);

/// af_per_day = (AF number or 1) x implicit_count x modifier / period_days,
/// evaluated at the range corners.
NormalizedDE normalize_de(const ExtractionResult& extraction, std::size_t de_index);

/// Sum of da x af_per_day over the DEs that survive duplicate removal, in
/// the common quantity basis.
struct DoseTotals {
  Rational min_per_day;
  Rational max_per_day;
  bool unit_based = false;
  std::string unit;
  std::string form;
};

/// Complementary DEs (distinct time-of-day slots, or joined by "and") add
/// up; DEs with equal values are duplicates; anything else is a conflict,
/// reported as nullopt.
std::optional<DoseTotals> combine_des(std::span<const NormalizedDE> ndes);

struct IngredientDosage {
  Rational min_per_day;
  Rational max_per_day;
  std::string unit;  // canonical unit, or "form:<form>" for count fallbacks

  bool operator==(const IngredientDosage&) const = default;
};

struct DailyDosage {
  std::vector<IngredientDosage> per_ingredient;

  bool operator==(const DailyDosage&) const = default;
};

/// Exactly one of `value` and `null_reason` is set.
struct DosageOutcome {
  std::optional<DailyDosage> value;
  std::optional<ReasonCode> null_reason;
  std::vector<std::string> diagnostics;
  std::vector<Span> contributing;

  bool has_value() const { return value.has_value(); }

  static DosageOutcome with_value(DailyDosage dd);
  static DosageOutcome null(ReasonCode reason, std::string note = {});
};

struct DosageOptions {
  /// Report min_per_day = 0 for as-needed Sigs. Off by default: ground truth
  /// keeps the scheduled minimum for PRN orders.
  bool prn_min_zero = false;
};

DosageOutcome calculate_daily_dosage(const MedicationOrder& order, const ExtractionResult& extraction,
                                     const Lexicon& lexicon, const DosageOptions& options = {});

}  // namespace sigdose
