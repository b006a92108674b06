#include <doctest.h>

#include "sigdose/dosage.hpp"
#include "sigtest.hpp"

using namespace sigdose;
using sigtest::run;

namespace {

struct Expected {
  Rational min;
  Rational max;
  std::string unit;
};

void check_value(const DosageOutcome& o, std::vector<Expected> expected) {
  REQUIRE_MESSAGE(o.value, (o.null_reason ? std::string(to_string(*o.null_reason)) : ""));
  CHECK_FALSE(o.null_reason);
  REQUIRE(o.value->per_ingredient.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(o.value->per_ingredient[i].min_per_day == expected[i].min);
    CHECK(o.value->per_ingredient[i].max_per_day == expected[i].max);
    CHECK(o.value->per_ingredient[i].unit == expected[i].unit);
  }
}

void check_null(const DosageOutcome& o, ReasonCode reason) {
  CHECK_FALSE(o.value);
  REQUIRE(o.null_reason);
  CHECK(*o.null_reason == reason);
}

NormalizedDE only_de(const char* sig) {
  auto r = extract(sig, default_lexicon());
  REQUIRE(r.des.size() == 1);
  return normalize_de(r, 0);
}

}  // namespace

TEST_CASE("reason codes round-trip") {
  for (int i = 0; i <= static_cast<int>(ReasonCode::ParseFailure); ++i) {
    auto code = static_cast<ReasonCode>(i);
    CHECK(parse_reason_code(to_string(code)) == code);
  }
  CHECK_FALSE(parse_reason_code("Nope"));
}

TEST_CASE("normalize_de") {
  auto n = only_de("two tablets twice daily");
  CHECK(n.da_min == 2);
  CHECK(n.af_per_day_min == 2);
  CHECK(n.af_per_day_max == 2);

  n = only_de("1 tab q week");
  CHECK(n.af_per_day_max == Rational(1, 7));
  CHECK(n.period_days == 7);

  n = only_de("1-2 tablets every 6 hours");
  CHECK(n.da_min == 1);
  CHECK(n.da_max == 2);
  CHECK(n.af_per_day_min == 4);
  CHECK(n.af_per_day_max == 4);

  n = only_de("1 tab every other day");
  CHECK(n.af_per_day_max == Rational(1, 2));

  n = only_de("2 tsp three times daily");
  CHECK(n.da_is_unit_based);
  CHECK(n.da_unit == "ml");
  CHECK(n.da_min == 10);

  n = only_de("1 tab every 4-6 hours");
  CHECK(n.af_per_day_min == 4);
  CHECK(n.af_per_day_max == 6);
}

TEST_CASE("combine_des") {
  NormalizedDE am{1, 1, false, "", "tablet", 1, 1, 1, "morning"};
  NormalizedDE pm{2, 2, false, "", "tablet", 1, 1, 1, "evening"};
  std::vector<NormalizedDE> both{am, pm};
  auto t = combine_des(both);
  REQUIRE(t);
  CHECK(t->min_per_day == 3);
  CHECK(t->max_per_day == 3);

  NormalizedDE q4{1, 1, false, "", "", 6, 6, Rational(1, 6)};
  std::vector<NormalizedDE> dup{q4, q4};
  t = combine_des(dup);
  REQUIRE(t);
  CHECK(t->max_per_day == 6);

  NormalizedDE three{1, 1, false, "", "", 3, 3, 1};
  NormalizedDE six{6, 6, false, "", "pill", 3, 3, 1};
  std::vector<NormalizedDE> conflict{three, six};
  CHECK_FALSE(combine_des(conflict));

  NormalizedDE mg{10, 10, true, "mg", "", 1, 1, 1, "morning"};
  std::vector<NormalizedDE> mixed{am, mg};
  CHECK_FALSE(combine_des(mixed));
}

TEST_CASE("worked daily dosage examples") {
  check_value(run("Take two tablets twice daily", "50mg"), {{200, 200, "mg"}});
  check_value(run("Take one tab in am and two tabs in pm", "50mg"), {{150, 150, "mg"}});
  check_value(run("one to two tablets daily", "7.5mg"), {{Rational(15, 2), 15, "mg"}});
  check_value(run("Take one(1) inhalation twice daily", "250-50 mcg/dose"), {{500, 500, "mcg"}, {100, 100, "mcg"}});
  check_value(run("1/2 tab bid", "2mg"), {{2, 2, "mg"}});
  check_value(run("1 tab po q week", "7mg"), {{1, 1, "mg"}});
  check_null(run("1000mcg IM monthly", "1000mcg"), ReasonCode::SubWeeklyFrequency);
  check_null(run("Take as directed.", "10mg"), ReasonCode::NeedMoreInfo_Uninformative);
  check_null(run("Take 1 tablet by mouth.", "10mg"), ReasonCode::NeedMoreInfo_MissingFrequency);
  check_value(run("Take 1-2 tablets by mouth every 6 hours as needed for Pain (max = 6 tabs/day).", "500mg"),
              {{2000, 3000, "mg"}});
}

TEST_CASE("null reasons") {
  check_null(run("twice daily", "10mg"), ReasonCode::NeedMoreInfo_MissingDose);
  check_null(run("", "10mg"), ReasonCode::NeedMoreInfo_Uninformative);
  check_null(run("Take 4 pills by mouth one hour prior to the procedure.", "5mg"), ReasonCode::NotMeaningful_NonRoutine);
  check_null(run("1 tablet 30-60 minutes before sexual intercourse", "50mg"), ReasonCode::NotMeaningful_NonRoutine);
  check_null(run("Take 1 tablet by mouth one time only.", "5mg"), ReasonCode::NotMeaningful_OneTime);
  check_null(run("Take 6 tab day1, 5 tab day 2, 4 tab day3", "4mg"), ReasonCode::VariableDoseOverDays);
  check_null(run("Apply to affected area twice daily", "", "cream"), ReasonCode::UnquantifiableForm);
  check_null(run("Use 1 Drop in the left eye twice daily", ""), ReasonCode::UnquantifiableForm);
  check_null(run("apply 1 application twice daily", "0.1%", "ointment"), ReasonCode::UnquantifiableForm);
  check_null(run("Take 1 tablet daily", "strong"), ReasonCode::StrengthUnavailable);
  check_null(run("Take 1 tablet daily. Take 2 tablets daily.", "5mg"), ReasonCode::NeedMoreInfo_Conflicting);
}

TEST_CASE("caps") {
  check_value(run("Take 10 mg three to four times daily. Do not exceed 30 MG per day", "10mg"), {{30, 30, "mg"}});
  check_null(run("1 tab q4h, max 3 tablets per day", "5mg"), ReasonCode::NeedMoreInfo_Conflicting);
  check_value(run("1-2 tabs every 6 hours, do not exceed 3000 mg per day", "500mg"), {{2000, 3000, "mg"}});
  check_value(run("1-2 tabs every 6 hours prn, not to exceed 10 tablets per day", "500mg"), {{2000, 4000, "mg"}});
}

TEST_CASE("as needed keeps the scheduled minimum unless asked") {
  const auto& lex = default_lexicon();
  MedicationOrder order{"x", "1-2 tabs every 6 hours as needed", "500mg", "", ""};
  auto r = extract(order.sig, lex);
  check_value(calculate_daily_dosage(order, r, lex), {{2000, 4000, "mg"}});
  DosageOptions opts;
  opts.prn_min_zero = true;
  check_value(calculate_daily_dosage(order, r, lex, opts), {{0, 4000, "mg"}});
}

TEST_CASE("count fallback without strength") {
  check_value(run("Take 2 tablets twice daily", ""), {{4, 4, "form:tablet"}});
  check_value(run("Take 2 twice daily", "", "capsule"), {{4, 4, "form:capsule"}});
}

TEST_CASE("unit-based doses use the dose unit") {
  auto o = run("Take 2.5 mg by mouth once daily", "5mg");
  check_value(o, {{Rational(5, 2), Rational(5, 2), "mg"}});
  o = run("Take 1 teaspoon three times daily", "125 mg/5 ml");
  check_value(o, {{15, 15, "ml"}});
  CHECK_FALSE(o.diagnostics.empty());
}

TEST_CASE("duplicate and conflicting restatements") {
  check_value(run("Take by mouth every 4 hours as needed for Cough. Take 1 teaspoon(s) as needed for cough every 4 hrs.", ""),
              {{30, 30, "ml"}});
  check_null(run("Take by mouth three times daily. take 6 pills three times daily", "10mg"),
             ReasonCode::NeedMoreInfo_Conflicting);
  check_null(run("Take 0.25 tablets by mouth once daily. TAKE ONE HALF (0.5) OF A  TABLET DAILY.", "1mg"),
             ReasonCode::NeedMoreInfo_Conflicting);
  check_value(run("Take 1 tablet daily. Take 1 tablet daily.", "5mg"), {{5, 5, "mg"}});
}

TEST_CASE("outcomes are exclusive and ordered") {
  for (const char* sig : {"1-2 tabs q4-6h", "as directed", "1 tab daily", "one tab in am and two in pm"}) {
    auto o = run(sig, "10mg");
    CHECK(o.value.has_value() != o.null_reason.has_value());
    if (o.value) {
      for (const auto& i : o.value->per_ingredient) CHECK(i.min_per_day <= i.max_per_day);
    }
  }
}
