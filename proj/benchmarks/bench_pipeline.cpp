#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "sigdose/dosage.hpp"

namespace {

const std::vector<sigdose::MedicationOrder>& orders() {
  static const std::vector<sigdose::MedicationOrder> o = {
      {"1", "Take two tablets twice daily", "50mg", "", "tablet"},
      {"2", "Take one tab in am and two tabs in pm", "50mg", "", "tablet"},
      {"3", "one to two tablets daily", "7.5mg", "", "tablet"},
      {"4", "Take one(1) inhalation twice daily", "250-50 mcg/dose", "", ""},
      {"5", "Take 1-2 tablets by mouth every 6 hours as needed for Pain (max = 6 tabs/day).", "500mg", "", "tablet"},
      {"6", "Take by mouth every 4 hours as needed for Cough. Take 1 teaspoon(s) as needed for cough every 4 hrs.", "", "", ""},
      {"7", "Take 6 tab day1, 5 tab day 2, 4 tab day3 , 3 tab day 4, 2 tab day 5, 1 tab day 6.", "4mg", "", "tablet"},
      {"8", "Take as directed.", "10mg", "", ""},
  };
  return o;
}

void BM_Tokenize(benchmark::State& state) {
  const auto& o = orders();
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& order : o) {
      auto t = sigdose::tokenize(order.sig);
      benchmark::DoNotOptimize(t);
      bytes += order.sig.size();
    }
  }
  state.SetBytesProcessed(static_cast<int64_t>(bytes));
}
BENCHMARK(BM_Tokenize);

void BM_Extract(benchmark::State& state) {
  const auto& lex = sigdose::default_lexicon();
  const auto& o = orders();
  for (auto _ : state) {
    for (const auto& order : o) {
      auto r = sigdose::extract(order.sig, lex);
      benchmark::DoNotOptimize(r);
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(o.size()));
}
BENCHMARK(BM_Extract);

void BM_Pipeline(benchmark::State& state) {
  const auto& lex = sigdose::default_lexicon();
  const auto& o = orders();
  for (auto _ : state) {
    for (const auto& order : o) {
      auto outcome = sigdose::calculate_daily_dosage(order, sigdose::extract(order.sig, lex), lex);
      benchmark::DoNotOptimize(outcome);
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(o.size()));
}
BENCHMARK(BM_Pipeline);

void BM_LoadLexicon(benchmark::State& state) {
  auto source = sigdose::default_lexicon_source();
  for (auto _ : state) {
    auto lex = sigdose::load_lexicon(source);
    benchmark::DoNotOptimize(lex);
  }
}
BENCHMARK(BM_LoadLexicon);

}  // namespace
BENCHMARK_MAIN();
