// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "sigtest.hpp"

using namespace sigdose;

namespace {

struct Result {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string describe(const DosageOutcome& o) {
  if (!o.value) return std::string(to_string(*o.null_reason));
  std::string s;
  for (const auto& i : o.value->per_ingredient) s += to_string(i.min_per_day) + "-" + to_string(i.max_per_day) + " " + i.unit + " ";
  return s;
}

// The outcome must equal the record's ground truth exactly, including the
// designated null reason.
void check_against_truth(const InputRecord& rec, const DosageOutcome& o, Result& res) {
  const auto& t = *rec.truth;
  if (t.daily_dosage) {
    if (!o.value || !(*o.value == *t.daily_dosage)) res.fail(rec.order.order_id + ": got " + describe(o));
  } else if (!o.null_reason || to_string(*o.null_reason) != *t.no_dd_reason) {
    res.fail(rec.order.order_id + ": got " + describe(o) + ", want " + *t.no_dd_reason);
  }
}

std::vector<InputRecord> golden(char prefix) {
  std::vector<InputRecord> out;
  for (auto& r : sigtest::load_orders("golden_orders.jsonl")) {
    if (r.order.order_id[0] == prefix) out.push_back(std::move(r));
  }
  return out;
}

Result golden_corpus() {
  Result res;
  auto records = golden('g');
  const auto& lex = default_lexicon();
  auto start = std::chrono::steady_clock::now();
  std::vector<DosageOutcome> outcomes;
  for (const auto& rec : records) outcomes.push_back(calculate_daily_dosage(rec.order, extract(rec.order.sig, lex), lex));
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (std::size_t i = 0; i < records.size(); ++i) check_against_truth(records[i], outcomes[i], res);
  if (records.size() != 14) res.fail("expected 14 golden orders, found " + std::to_string(records.size()));
  if (elapsed >= 1.0) res.fail("took " + std::to_string(elapsed) + " s");
  if (res.pass) res.detail = std::to_string(records.size()) + " orders in " + std::to_string(elapsed * 1000) + " ms";
  return res;
}

Result metrics_oracle() {
  Result res;
  EvalCounts c{800, 7, 23, 8, 162};
  auto r = EvalReport::from_counts(c);
  if (r.accuracy != Rational(962, 1000)) res.fail("accuracy " + to_string(r.accuracy));
  if (std::abs(to_double(r.precision) - 800.0 / 815.0) > 1e-9) res.fail("precision " + to_string(r.precision));
  // Recall straight from the counts: 800 / (800 + 7 + 23).
  if (r.recall != Rational(800, 830)) res.fail("recall " + to_string(r.recall));
  if (res.pass) {
    std::ostringstream s;
    s << "accuracy " << to_string(r.accuracy) << ", precision " << to_double(r.precision) << ", recall "
      << to_double(r.recall) << " (computed)";
    res.detail = s.str();
  }
  return res;
}

Result weekly_averaging() {
  Result res;
  std::mt19937 rng(20240301);
  for (int i = 0; i < 100; ++i) {
    auto c = sigtest::weekly_case(rng);
    auto o = sigtest::run(c.sig, c.strength);
    Rational want = c.weekly_total / 7;
    if (!o.value || o.value->per_ingredient.size() != 1 || o.value->per_ingredient[0].min_per_day != want ||
        o.value->per_ingredient[0].max_per_day != want || o.value->per_ingredient[0].unit != c.unit) {
      res.fail("'" + c.sig + "' (" + c.strength + "): got " + describe(o) + ", want " + to_string(want));
    }
  }
  if (res.pass) res.detail = "100 sigs";
  return res;
}

Result strength_linearity() {
  Result res;
  std::mt19937 rng(20240302);
  const Rational ks[] = {2, 10, Rational(1, 2)};
  static const char* nulls[] = {"Take as directed.", "1 tab by mouth", "1 tab monthly", "1 tab one time only"};
  std::size_t values = 0;
  for (int i = 0; i < 200; ++i) {
    auto c = sigtest::corner_case(rng);
    std::string sig = rng() % 8 == 0 ? nulls[rng() % 4] : c.sig;
    Rational a = 1 + rng() % 400;
    Rational b = 1 + rng() % 100;
    bool combo = rng() % 3 == 0;
    Rational k = ks[rng() % 3];
    auto strength = [&](const Rational& f) {
      return combo ? to_string(a * f) + "-" + to_string(b * f) + " mg" : to_string(a * f) + " mg";
    };
    auto base = sigtest::run(sig, strength(1));
    auto scaled = sigtest::run(sig, strength(k));
    if (base.value.has_value() != scaled.value.has_value()) {
      res.fail("'" + sig + "' changed status under k=" + to_string(k));
      continue;
    }
    if (!base.value) continue;
    ++values;
    const auto& x = base.value->per_ingredient;
    const auto& y = scaled.value->per_ingredient;
    if (x.size() != y.size()) {
      res.fail("'" + sig + "' ingredient count changed");
      continue;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (y[j].min_per_day != x[j].min_per_day * k || y[j].max_per_day != x[j].max_per_day * k) {
        res.fail("'" + sig + "' not scaled by " + to_string(k));
      }
    }
  }
  if (res.pass) res.detail = "200 sigs (" + std::to_string(values) + " with values)";
  return res;
}

Result range_corners() {
  Result res;
  std::mt19937 rng(20240303);
  const int n = 600;
  for (int i = 0; i < n; ++i) {
    auto c = sigtest::corner_case(rng);
    auto o = sigtest::run(c.sig, c.strength);
    if (!o.value || o.value->per_ingredient[0].min_per_day != c.min || o.value->per_ingredient[0].max_per_day != c.max) {
      res.fail("'" + c.sig + "' (" + c.strength + "): got " + describe(o) + ", want " + to_string(c.min) + "-" +
               to_string(c.max));
    }
  }
  if (res.pass) res.detail = std::to_string(n) + " sigs";
  return res;
}

Result additivity() {
  Result res;
  std::mt19937 rng(20240304);
  for (int i = 0; i < 100; ++i) {
    auto c = sigtest::additive_case(rng);
    auto both = sigtest::run(c.combined, c.strength);
    auto first = sigtest::run(c.first, c.strength);
    auto second = sigtest::run(c.second, c.strength);
    if (!both.value || !first.value || !second.value) {
      res.fail("'" + c.combined + "': " + describe(both));
      continue;
    }
    const auto& b = both.value->per_ingredient[0];
    const auto& f = first.value->per_ingredient[0];
    const auto& s = second.value->per_ingredient[0];
    if (b.min_per_day != f.min_per_day + s.min_per_day || b.max_per_day != f.max_per_day + s.max_per_day) {
      res.fail("'" + c.combined + "': " + describe(both) + " != " + describe(first) + "+ " + describe(second));
    }
  }
  if (res.pass) res.detail = "100 sigs";
  return res;
}

Result span_integrity() {
  Result res;
  const auto& lex = default_lexicon();
  std::vector<std::string> sigs;
  for (const auto& r : sigtest::load_orders("golden_orders.jsonl")) sigs.push_back(r.order.sig);
  std::mt19937 rng(20240305);
  for (int i = 0; i < 1000; ++i) sigs.push_back(sigtest::fuzz_sig(rng));
  for (const auto& sig : sigs) {
    try {
      auto r = extract(sig, lex);
      auto errors = sigtest::integrity_errors(r);
      if (!errors.empty()) res.fail("'" + sig + "': " + errors.front());
      MedicationOrder order{"f", sig, "5mg", "", ""};
      auto o = calculate_daily_dosage(order, r, lex);
      if (o.value.has_value() == o.null_reason.has_value()) res.fail("'" + sig + "': outcome not exclusive");
    } catch (const std::exception& e) {
      res.fail("'" + sig + "' threw " + e.what());
    }
  }
  if (res.pass) res.detail = std::to_string(sigs.size()) + " sigs";
  return res;
}

Result extractor_equivalence() {
  Result res;
  std::ifstream in(sigtest::fixture_path("external_entities.jsonl"));
  auto index = load_external_entities(in);
  const auto& lex = default_lexicon();
  BatchOptions rules;
  BatchOptions external;
  external.extractor = ExtractorKind::External;
  external.external_entities = &index;
  std::size_t compared = 0;
  for (const auto& rec : sigtest::load_orders("golden_orders.jsonl")) {
    if (!index.count(rec.order.order_id)) continue;
    ++compared;
    auto a = process_record(rec, lex, rules);
    auto b = process_record(rec, lex, external);
    if (a.outcome.value != b.outcome.value || a.outcome.null_reason != b.outcome.null_reason) {
      res.fail(rec.order.order_id + ": rules " + describe(a.outcome) + " vs external " + describe(b.outcome));
    }
  }
  if (compared != 10) res.fail("expected 10 fixtures, compared " + std::to_string(compared));
  if (res.pass) res.detail = std::to_string(compared) + " orders";
  return res;
}

Result error_regressions() {
  Result res;
  auto records = golden('t');
  const auto& lex = default_lexicon();
  for (const auto& rec : records) {
    check_against_truth(rec, calculate_daily_dosage(rec.order, extract(rec.order.sig, lex), lex), res);
  }
  if (records.size() != 5) res.fail("expected 5 regression orders");
  if (res.pass) res.detail = "cap, duplicate, conflict, weekday list, misspelling";
  return res;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Result()>> criteria[] = {
      {"1 golden corpus", golden_corpus},
      {"2 metrics oracle", metrics_oracle},
      {"3 weekly averaging", weekly_averaging},
      {"4 strength linearity", strength_linearity},
      {"5 range corners", range_corners},
      {"6 additivity", additivity},
      {"7 span integrity", span_integrity},
      {"8 extractor seam", extractor_equivalence},
      {"9 error regressions", error_regressions},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << name << "  " << r.detail << '\n';
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
