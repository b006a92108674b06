#include "sigdose/report.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace sigdose {

namespace {

std::string dosage_text(const DosageOutcome& outcome) {
  if (!outcome.value) return "-";
  std::string text;
  for (const auto& ing : outcome.value->per_ingredient) {
    if (!text.empty()) text += "; ";
    text += ing.min_per_day == ing.max_per_day ? to_string(ing.max_per_day)
                                               : to_string(ing.min_per_day) + "-" + to_string(ing.max_per_day);
    text += " " + ing.unit;
  }
  return text;
}

std::string fixed(const Rational& r) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << to_double(r);
  return s.str();
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "jsonl") return ReportFormat::Jsonl;
  if (name == "table") return ReportFormat::Table;
  return std::nullopt;
}

std::string null_reason_histogram(std::span<const BatchItem> items) {
  std::map<std::string, std::size_t> counts;
  for (const auto& item : items) {
    if (item.outcome.null_reason) ++counts[std::string(to_string(*item.outcome.null_reason))];
  }
  std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::size_t width = 0;
  for (const auto& [reason, _] : rows) width = std::max(width, reason.size());
  std::ostringstream out;
  for (const auto& [reason, n] : rows) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << reason << "  " << n << '\n';
  }
  return out.str();
}

void report_outcomes(std::ostream& out, std::span<const BatchItem> items, ReportFormat format) {
  if (format == ReportFormat::Jsonl) {
    for (const auto& item : items) out << to_jsonl(item) << '\n';
    return;
  }
  if (items.empty()) return;

  std::vector<std::array<std::string, 3>> rows;
  std::array<std::size_t, 3> width{8, 12, 6};
  for (const auto& item : items) {
    std::array<std::string, 3> row{item.order_id, dosage_text(item.outcome),
                                   item.outcome.null_reason ? std::string(to_string(*item.outcome.null_reason)) : ""};
    for (std::size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
    rows.push_back(std::move(row));
  }
  auto emit = [&](const std::array<std::string, 3>& row) {
    out << std::left << std::setw(static_cast<int>(width[0])) << row[0] << "  "
        << std::setw(static_cast<int>(width[1])) << row[1] << "  " << row[2] << '\n';
  };
  emit({"order_id", "daily_dosage", "reason"});
  for (const auto& row : rows) emit(row);

  std::size_t nulls = std::count_if(items.begin(), items.end(), [](const BatchItem& i) { return !i.outcome.has_value(); });
  out << '\n' << items.size() << " orders, " << items.size() - nulls << " with a daily dosage, " << nulls
      << " without\n";
  if (nulls) out << "null reasons:\n" << null_reason_histogram(items);
}

void report_eval(std::ostream& out, const EvalReport& report, ReportFormat format) {
  const EvalCounts& c = report.counts;
  if (format == ReportFormat::Jsonl) {
    nlohmann::ordered_json j;
    j["correct"] = c.correct;
    j["incorrect"] = c.incorrect;
    j["missed"] = c.missed;
    j["spurious"] = c.spurious;
    j["both_null"] = c.both_null;
    j["precision"] = to_string(report.precision);
    j["recall"] = to_string(report.recall);
    j["f1"] = to_string(report.f1);
    j["accuracy"] = to_string(report.accuracy);
    for (const auto& e : report.entity_level) {
      j["entities"][std::string(to_string(e.kind))] = {{"tp", e.tp},
                                                       {"fp", e.fp},
                                                       {"fn", e.fn},
                                                       {"precision", to_string(e.precision)},
                                                       {"recall", to_string(e.recall)},
                                                       {"f1", to_string(e.f1)}};
    }
    out << j.dump() << '\n';
    return;
  }

  out << "                   Ground truth\n"
      << "                   value      none\n"
      << "System  value      " << std::left << std::setw(11)
      << (std::to_string(c.correct) + " / " + std::to_string(c.incorrect)) << c.spurious << '\n'
      << "        none       " << std::setw(11) << c.missed << c.both_null << '\n'
      << "(value/value cell: correct / incorrect)\n\n"
      << "N          " << c.total() << '\n'
      << "precision  " << fixed(report.precision) << "  (" << to_string(report.precision) << ")\n"
      << "recall     " << fixed(report.recall) << "  (" << to_string(report.recall) << ")\n"
      << "f1         " << fixed(report.f1) << "  (" << to_string(report.f1) << ")\n"
      << "accuracy   " << fixed(report.accuracy) << "  (" << to_string(report.accuracy) << ")\n";
  if (!report.entity_level.empty()) {
    out << "\nentity  tp  fp  fn  precision  recall  f1\n";
    for (const auto& e : report.entity_level) {
      out << std::left << std::setw(8) << (e.kind == CompoundKind::DosagePerAdministration ? "DA" : "AF")
          << std::setw(4) << e.tp << std::setw(4) << e.fp << std::setw(4) << e.fn << std::setw(11)
          << fixed(e.precision) << std::setw(8) << fixed(e.recall) << fixed(e.f1) << '\n';
    }
  }
}

}  // namespace sigdose
