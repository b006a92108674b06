#include <doctest.h>

#include "sigdose/scoring.hpp"

using namespace sigdose;

namespace {

DailyDosage dd(Rational min, Rational max, std::string unit) { return DailyDosage{{{min, max, std::move(unit)}}}; }

EvalCounts thousand_orders() {
  EvalCounts c;
  c.correct = 800;
  c.incorrect = 7;
  c.missed = 23;
  c.spurious = 8;
  c.both_null = 162;
  return c;
}

}  // namespace

TEST_CASE("metrics from a 1000-order confusion table") {
  auto r = EvalReport::from_counts(thousand_orders());
  CHECK(r.counts.total() == 1000);
  CHECK(r.accuracy == Rational(962, 1000));
  CHECK(r.precision == Rational(800, 815));
  CHECK(r.recall == Rational(800, 830));
  CHECK(r.f1 == Rational(1600, 1645));
  CHECK(to_double(r.precision) == doctest::Approx(800.0 / 815.0).epsilon(1e-12));
}

TEST_CASE("zero denominators report 0") {
  auto r = EvalReport::from_counts({});
  CHECK(r.precision == 0);
  CHECK(r.recall == 0);
  CHECK(r.f1 == 0);
  CHECK(r.accuracy == 0);
}

TEST_CASE("score_end_to_end counting") {
  std::vector<GroundTruthRecord> gt = {
      {"a", dd(200, 200, "mg"), {}, {}, {}},
      {"b", dd(1, 2, "mg"), {}, {}, {}},
      {"c", dd(5, 5, "mg"), {}, {}, {}},
      {"d", std::nullopt, "NeedMoreInfo_Uninformative", {}, {}},
      {"e", std::nullopt, "VariableDoseOverDays", {}, {}},
  };
  std::vector<Prediction> pred = {
      {"a", dd(Rational(1, 5), Rational(1, 5), "g")},  // same after alignment
      {"b", dd(1, 3, "mg")},
      {"c", std::nullopt},
      {"d", std::nullopt},
      {"e", dd(1, 1, "mg")},
  };
  auto r = score_end_to_end(pred, gt);
  CHECK(r.counts.correct == 1);
  CHECK(r.counts.incorrect == 1);
  CHECK(r.counts.missed == 1);
  CHECK(r.counts.spurious == 1);
  CHECK(r.counts.both_null == 1);
  CHECK(r.counts.total() == gt.size());
}

TEST_CASE("perfect agreement scores 1") {
  std::vector<GroundTruthRecord> gt = {{"a", dd(2, 2, "mg"), {}, {}, {}}, {"b", std::nullopt, "x", {}, {}}};
  std::vector<Prediction> pred = {{"a", dd(2, 2, "mg")}, {"b", std::nullopt}};
  auto r = score_end_to_end(pred, gt);
  CHECK(r.precision == 1);
  CHECK(r.recall == 1);
  CHECK(r.accuracy == 1);
}

TEST_CASE("unit alignment") {
  CHECK(dosage_matches(dd(500, 500, "mcg"), dd(Rational(1, 2), Rational(1, 2), "mg")));
  CHECK_FALSE(dosage_matches(dd(500, 500, "mcg"), dd(500, 500, "mg")));
  CHECK_FALSE(dosage_matches(dd(5, 5, "ml"), dd(5, 5, "mg")));
  DailyDosage two{{{500, 500, "mcg"}, {100, 100, "mcg"}}};
  DailyDosage one_wrong{{{500, 500, "mcg"}, {50, 50, "mcg"}}};
  CHECK(dosage_matches(two, two));
  CHECK_FALSE(dosage_matches(two, one_wrong));
  CHECK_FALSE(dosage_matches(two, dd(500, 500, "mcg")));
}

TEST_CASE("form counts only count against form-based truth") {
  std::vector<GroundTruthRecord> gt = {{"a", dd(4, 4, "mg"), {}, {}, {}}, {"b", std::nullopt, "x", {}, {}},
                                       {"c", dd(2, 2, "form:tablet"), {}, {}, {}}};
  std::vector<Prediction> pred = {{"a", dd(4, 4, "form:tablet")}, {"b", dd(4, 4, "form:tablet")},
                                  {"c", dd(2, 2, "form:tablet")}};
  auto r = score_end_to_end(pred, gt);
  CHECK(r.counts.missed == 1);
  CHECK(r.counts.both_null == 1);
  CHECK(r.counts.correct == 1);
}

TEST_CASE("key mismatch lists ids") {
  std::vector<GroundTruthRecord> gt = {{"a", dd(1, 1, "mg"), {}, {}, {}}, {"b", dd(1, 1, "mg"), {}, {}, {}}};
  std::vector<Prediction> pred = {{"a", dd(1, 1, "mg")}, {"z", std::nullopt}};
  try {
    score_end_to_end(pred, gt);
    FAIL("expected KeyMismatchError");
  } catch (const KeyMismatchError& e) {
    CHECK(e.missing() == std::vector<std::string>{"b"});
    CHECK(e.extra() == std::vector<std::string>{"z"});
  }
}

TEST_CASE("score_entities is strict") {
  using K = CompoundKind;
  std::vector<EntityAnnotation> gt = {{"1", K::DosagePerAdministration, 5, 18}, {"1", K::AdministrationFrequency, 19, 37}};
  auto same = score_entities(gt, gt);
  for (const auto& s : same) {
    CHECK(s.precision == 1);
    CHECK(s.recall == 1);
    CHECK(s.f1 == 1);
  }

  // "two(2)" predicted where the truth is "two(2) times daily".
  std::vector<EntityAnnotation> partial = {{"1", K::DosagePerAdministration, 5, 18}, {"1", K::AdministrationFrequency, 19, 25}};
  auto s = score_entities(partial, gt);
  CHECK(s[1].tp == 0);
  CHECK(s[1].fp == 1);
  CHECK(s[1].fn == 1);

  auto none = score_entities({}, gt);
  CHECK(none[0].precision == 0);
  CHECK(none[0].recall == 0);

  // Same offsets in another order do not match.
  std::vector<EntityAnnotation> other = {{"2", K::DosagePerAdministration, 5, 18}};
  CHECK(score_entities(other, gt)[0].tp == 0);
}
