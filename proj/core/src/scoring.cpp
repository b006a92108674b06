#include "sigdose/scoring.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "sigdose/tokenizer.hpp"

namespace sigdose {

namespace {

Rational ratio(std::size_t num, std::size_t den) {
  if (den == 0) return 0;
  return Rational(num) / Rational(den);
}

Rational harmonic(const Rational& p, const Rational& r) {
  if (p + r == 0) return 0;
  return 2 * p * r / (p + r);
}

bool is_form_unit(std::string_view unit) { return unit.starts_with("form:"); }

bool form_based(const DailyDosage& dd) {
  return std::any_of(dd.per_ingredient.begin(), dd.per_ingredient.end(),
                     [](const IngredientDosage& i) { return is_form_unit(i.unit); });
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

EvalReport EvalReport::from_counts(const EvalCounts& counts) {
  EvalReport report;
  report.counts = counts;
  std::size_t tp = counts.correct;
  std::size_t fp = counts.incorrect + counts.spurious;
  std::size_t fn = counts.incorrect + counts.missed;
  report.precision = ratio(tp, tp + fp);
  report.recall = ratio(tp, tp + fn);
  report.f1 = harmonic(report.precision, report.recall);
  report.accuracy = ratio(tp + counts.both_null, counts.total());
  return report;
}

KeyMismatchError::KeyMismatchError(std::vector<std::string> missing, std::vector<std::string> extra)
    : std::invalid_argument("prediction ids do not match ground truth; missing: [" + join(missing) +
                            "], extra: [" + join(extra) + "]"),
      missing_(std::move(missing)),
      extra_(std::move(extra)) {}

std::pair<Rational, std::string> align_unit(const Rational& amount, std::string_view unit) {
  std::string u = to_lower(unit);
  if (u == "mcg" || u == "ug" || u == "microgram" || u == "micrograms") return {amount / 1000, "mg"};
  if (u == "g" || u == "gm" || u == "gram" || u == "grams") return {amount * 1000, "mg"};
  if (u == "milligram" || u == "milligrams") return {amount, "mg"};
  if (u == "l" || u == "liter" || u == "liters") return {amount * 1000, "ml"};
  if (u == "units" || u == "iu") return {amount, "unit"};
  return {amount, u};
}

bool dosage_matches(const DailyDosage& predicted, const DailyDosage& truth) {
  if (predicted.per_ingredient.size() != truth.per_ingredient.size()) return false;
  for (std::size_t i = 0; i < truth.per_ingredient.size(); ++i) {
    const auto& p = predicted.per_ingredient[i];
    const auto& t = truth.per_ingredient[i];
    if (align_unit(p.min_per_day, p.unit) != align_unit(t.min_per_day, t.unit)) return false;
    if (align_unit(p.max_per_day, p.unit) != align_unit(t.max_per_day, t.unit)) return false;
  }
  return true;
}

EvalReport score_end_to_end(std::span<const Prediction> predictions,
                            std::span<const GroundTruthRecord> ground_truth) {
  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> extra;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.order_id, &p).second) extra.push_back(p.order_id + " (duplicate)");
  }
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& g : ground_truth) {
    seen.insert(g.order_id);
    if (!by_id.count(g.order_id)) missing.push_back(g.order_id);
  }
  for (const auto& [id, _] : by_id) {
    if (!seen.count(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty()) throw KeyMismatchError(std::move(missing), std::move(extra));

  EvalCounts counts;
  for (const auto& g : ground_truth) {
    const auto& predicted = by_id.at(g.order_id)->daily_dosage;
    bool truth_has_value = g.daily_dosage.has_value();
    bool pred_has_value = predicted.has_value();
    if (pred_has_value && form_based(*predicted) && !(truth_has_value && form_based(*g.daily_dosage))) {
      pred_has_value = false;
    }
    if (truth_has_value && pred_has_value) {
      ++(dosage_matches(*predicted, *g.daily_dosage) ? counts.correct : counts.incorrect);
    } else if (truth_has_value) {
      ++counts.missed;
    } else if (pred_has_value) {
      ++counts.spurious;
    } else {
      ++counts.both_null;
    }
  }
  return EvalReport::from_counts(counts);
}

std::vector<EntityScore> score_entities(std::span<const EntityAnnotation> predicted,
                                        std::span<const EntityAnnotation> truth) {
  using Key = std::tuple<std::string, std::size_t, std::size_t>;
  std::vector<EntityScore> scores;
  for (CompoundKind kind : {CompoundKind::DosagePerAdministration, CompoundKind::AdministrationFrequency}) {
    std::set<Key> pred_set, truth_set;
    for (const auto& a : predicted) {
      if (a.kind == kind) pred_set.emplace(a.order_id, a.start, a.end);
    }
    for (const auto& a : truth) {
      if (a.kind == kind) truth_set.emplace(a.order_id, a.start, a.end);
    }
    EntityScore s;
    s.kind = kind;
    for (const auto& k : pred_set) {
      ++(truth_set.count(k) ? s.tp : s.fp);
    }
    s.fn = truth_set.size() - s.tp;
    s.precision = ratio(s.tp, s.tp + s.fp);
    s.recall = ratio(s.tp, s.tp + s.fn);
    s.f1 = harmonic(s.precision, s.recall);
    scores.push_back(s);
  }
  return scores;
}

}  // namespace sigdose
