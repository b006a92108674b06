#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigdose/dosage.hpp"
#include "sigdose/extraction.hpp"
#include "sigdose/rational.hpp"

namespace sigdose {

/// Expert annotation for one order. Exactly one of `daily_dosage` and
/// `no_dd_reason` is set.
struct GroundTruthRecord {
  std::string order_id;
  std::optional<DailyDosage> daily_dosage;
  std::optional<std::string> no_dd_reason;
  std::vector<Span> da_spans;
  std::vector<Span> af_spans;
};

struct Prediction {
  std::string order_id;
  std::optional<DailyDosage> daily_dosage;  // nullopt = no daily dosage
};

struct EvalCounts {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t missed = 0;
  std::size_t spurious = 0;
  std::size_t both_null = 0;

  std::size_t total() const { return correct + incorrect + missed + spurious + both_null; }
  bool operator==(const EvalCounts&) const = default;
};

struct EntityScore {
  CompoundKind kind = CompoundKind::DosagePerAdministration;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  Rational precision;
  Rational recall;
  Rational f1;
};

/// TP = correct, FP = incorrect + spurious, FN = incorrect + missed.
/// Ratios with a zero denominator are reported as 0.
struct EvalReport {
  EvalCounts counts;
  Rational precision;
  Rational recall;
  Rational f1;
  Rational accuracy;  // (TP + both_null) / N
  std::vector<EntityScore> entity_level;

  static EvalReport from_counts(const EvalCounts& counts);
};

class KeyMismatchError : public std::invalid_argument {
 public:
  KeyMismatchError(std::vector<std::string> missing, std::vector<std::string> extra);

  const std::vector<std::string>& missing() const { return missing_; }  // in GT, not predicted
  const std::vector<std::string>& extra() const { return extra_; }      // predicted, not in GT

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

/// Amount and unit on a common scale: g and mcg become mg, l becomes ml.
std::pair<Rational, std::string> align_unit(const Rational& amount, std::string_view unit);

/// Same number of ingredients, and per ingredient the same min, max and
/// unit after alignment.
bool dosage_matches(const DailyDosage& predicted, const DailyDosage& truth);

/// A form-count fallback ("form:tablet") is only a value when the truth is
/// also expressed in forms; otherwise it scores as no prediction.
EvalReport score_end_to_end(std::span<const Prediction> predictions,
                            std::span<const GroundTruthRecord> ground_truth);

struct EntityAnnotation {
  std::string order_id;
  CompoundKind kind = CompoundKind::DosagePerAdministration;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const EntityAnnotation&) const = default;
};

/// Strict matching on (order_id, kind, start, end). One score per DA and AF.
std::vector<EntityScore> score_entities(std::span<const EntityAnnotation> predicted,
                                        std::span<const EntityAnnotation> truth);

}  // namespace sigdose
