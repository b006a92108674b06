#include "sigdose/batch.hpp"

#include <istream>

#include <json.hpp>

namespace sigdose {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string text_field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  throw std::invalid_argument(std::string("field '") + name + "' must be a string");
}

Rational rational_field(const json& v, const char* name) {
  std::string text = v.is_string() ? v.get<std::string>() : v.is_number() ? v.dump() : std::string{};
  auto r = parse_rational(text);
  if (!r || *r < 0) throw std::invalid_argument(std::string("field '") + name + "' is not a quantity");
  return *r;
}

std::vector<json> as_list(const json& v) {
  if (v.is_array()) return {v.begin(), v.end()};
  return {v};
}

std::string truth_unit(const std::string& unit, const Lexicon& lexicon) {
  if (unit.starts_with("form:")) return unit;
  try {
    auto [scale, canonical] = canonicalize_unit(1, unit, lexicon);
    if (scale == 1) return canonical;
  } catch (const StrengthError&) {
  }
  return to_lower(unit);
}

std::vector<Span> spans_field(const json& obj, const char* name, std::string_view sig) {
  std::vector<Span> spans;
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return spans;
  const json& v = *it;
  std::vector<json> pairs;
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer()) {
    pairs.push_back(v);
  } else if (v.is_array()) {
    pairs.assign(v.begin(), v.end());
  } else {
    throw std::invalid_argument(std::string("field '") + name + "' must be [start, end] or a list of them");
  }
  for (const json& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
      throw std::invalid_argument(std::string("field '") + name + "' has a malformed span");
    }
    auto start = p[0].get<std::size_t>();
    auto end = p[1].get<std::size_t>();
    if (start > end || end > sig.size()) {
      throw std::invalid_argument(std::string("field '") + name + "' span is out of range");
    }
    spans.push_back(Span::of(sig, start, end));
  }
  return spans;
}

std::optional<GroundTruthRecord> truth_fields(const json& obj, const MedicationOrder& order,
                                              const Lexicon& lexicon) {
  bool has_dd = obj.contains("gt_max_dd") || obj.contains("gt_min_dd");
  bool has_reason = obj.contains("gt_no_dd_reason") && !obj["gt_no_dd_reason"].is_null();
  bool has_spans = obj.contains("gt_da_span") || obj.contains("gt_af_span");
  if (!has_dd && !has_reason && !has_spans) return std::nullopt;
  if (has_dd && has_reason) throw std::invalid_argument("gt_no_dd_reason given together with gt dosage");

  GroundTruthRecord truth;
  truth.order_id = order.order_id;
  truth.da_spans = spans_field(obj, "gt_da_span", order.sig);
  truth.af_spans = spans_field(obj, "gt_af_span", order.sig);
  if (has_reason) truth.no_dd_reason = text_field(obj, "gt_no_dd_reason");
  if (has_dd) {
    if (!obj.contains("gt_max_dd") || !obj.contains("gt_unit")) {
      throw std::invalid_argument("gt dosage needs gt_max_dd and gt_unit");
    }
    auto maxes = as_list(obj["gt_max_dd"]);
    auto mins = obj.contains("gt_min_dd") ? as_list(obj["gt_min_dd"]) : maxes;
    auto units = as_list(obj["gt_unit"]);
    if (mins.size() != maxes.size() || units.size() != maxes.size() || maxes.empty()) {
      throw std::invalid_argument("gt_min_dd, gt_max_dd and gt_unit differ in length");
    }
    DailyDosage dd;
    for (std::size_t i = 0; i < maxes.size(); ++i) {
      if (!units[i].is_string()) throw std::invalid_argument("gt_unit must be a string");
      IngredientDosage ing{rational_field(mins[i], "gt_min_dd"), rational_field(maxes[i], "gt_max_dd"),
                           truth_unit(units[i].get<std::string>(), lexicon)};
      if (ing.min_per_day > ing.max_per_day) throw std::invalid_argument("gt_min_dd exceeds gt_max_dd");
      dd.per_ingredient.push_back(std::move(ing));
    }
    truth.daily_dosage = std::move(dd);
  }
  return truth;
}

ordered_json spans_json(const std::vector<CompoundEntity>& entities) {
  ordered_json out = ordered_json::array();
  for (const auto& e : entities) {
    out.push_back({{"start", e.span.start}, {"end", e.span.end}, {"text", e.span.text}});
  }
  return out;
}

}  // namespace

ExternalEntityIndex load_external_entities(std::istream& in) {
  ExternalEntityIndex index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw DataError(line_no, "not a JSON object");
    if (!obj.contains("order_id") || !obj.contains("entities") || !obj["entities"].is_array()) {
      throw DataError(line_no, "expected order_id and an entities list");
    }
    std::string id = obj["order_id"].is_string() ? obj["order_id"].get<std::string>() : obj["order_id"].dump();
    auto& list = index[id];
    for (const json& e : obj["entities"]) {
      if (!e.is_object() || !e.contains("label") || !e["label"].is_string() ||
          !e.contains("start") || !e["start"].is_number_unsigned() || !e.contains("end") ||
          !e["end"].is_number_unsigned()) {
        throw DataError(line_no, "entity needs label, start and end");
      }
      auto label = parse_external_label(e["label"].get<std::string>());
      if (!label) throw DataError(line_no, "unknown entity label '" + e["label"].get<std::string>() + "'");
      list.push_back({*label, e["start"].get<std::size_t>(), e["end"].get<std::size_t>()});
    }
  }
  return index;
}

InputRecord parse_input_record(std::string_view line, std::size_t line_no, const Lexicon& lexicon) {
  InputRecord record;
  record.line = line_no;
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    record.error = "line " + std::to_string(line_no) + ": not a JSON object";
    return record;
  }
  try {
    record.order.order_id = text_field(obj, "order_id");
    if (record.order.order_id.empty()) record.order.order_id = "line-" + std::to_string(line_no);
    if (!obj.contains("sig") || !obj["sig"].is_string()) {
      throw std::invalid_argument("missing string field 'sig'");
    }
    record.order.sig = obj["sig"].get<std::string>();
    record.order.strength_text = text_field(obj, "strength");
    record.order.route = text_field(obj, "route");
    record.order.form = text_field(obj, "form");
    record.truth = truth_fields(obj, record.order, lexicon);
  } catch (const std::exception& e) {
    record.error = "line " + std::to_string(line_no) + ": " + e.what();
  }
  return record;
}

BatchItem process_record(const InputRecord& record, const Lexicon& lexicon, const BatchOptions& options) {
  BatchItem item;
  item.line = record.line;
  item.order_id = record.order.order_id;
  item.truth = record.truth;
  if (!record.error.empty()) {
    item.outcome = DosageOutcome::null(ReasonCode::ParseFailure, record.error);
    return item;
  }
  try {
    if (options.extractor == ExtractorKind::External) {
      std::span<const ExternalEntity> entities;
      if (options.external_entities) {
        auto it = options.external_entities->find(record.order.order_id);
        if (it != options.external_entities->end()) entities = it->second;
      }
      item.extraction = external_entities_to_compound(record.order.sig, entities, lexicon);
    } else {
      item.extraction = extract(record.order.sig, lexicon);
    }
  } catch (const ExternalContractError& e) {
    item.outcome = DosageOutcome::null(ReasonCode::ParseFailure, e.what());
    return item;
  }
  item.outcome = calculate_daily_dosage(record.order, item.extraction, lexicon, options.dosage);
  return item;
}

BatchStats run_batch(std::istream& in, const Lexicon& lexicon, const BatchOptions& options,
                     const std::function<void(const BatchItem&)>& sink) {
  BatchStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    InputRecord record = parse_input_record(line, line_no, lexicon);
    BatchItem item = process_record(record, lexicon, options);
    ++stats.records;
    if (!record.error.empty()) ++stats.malformed;
    ++(item.outcome.has_value() ? stats.values : stats.nulls);
    sink(item);
  }
  if (in.bad()) throw DataError(line_no, "read error");
  return stats;
}

std::string to_jsonl(const BatchItem& item) {
  ordered_json out;
  out["order_id"] = item.order_id;
  if (item.outcome.value) {
    ordered_json values = ordered_json::array();
    for (const auto& ing : item.outcome.value->per_ingredient) {
      values.push_back({{"min", to_string(ing.min_per_day)}, {"max", to_string(ing.max_per_day)}, {"unit", ing.unit}});
    }
    out["daily_dosage"] = values;
    out["null_reason"] = nullptr;
  } else {
    out["daily_dosage"] = nullptr;
    out["null_reason"] = std::string(to_string(*item.outcome.null_reason));
  }
  out["diagnostics"] = item.outcome.diagnostics;
  out["entities"] = {{"da", spans_json(item.extraction.das)},
                     {"af", spans_json(item.extraction.afs)},
                     {"de", spans_json(item.extraction.des)}};
  return out.dump(-1, ' ', false, json::error_handler_t::replace);
}

Prediction parse_prediction(std::string_view line, std::size_t line_no) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("order_id")) {
    throw DataError(line_no, "expected a JSON object with order_id");
  }
  Prediction p;
  p.order_id = obj["order_id"].is_string() ? obj["order_id"].get<std::string>() : obj["order_id"].dump();
  auto it = obj.find("daily_dosage");
  if (it == obj.end() || it->is_null()) return p;
  if (!it->is_array()) throw DataError(line_no, "daily_dosage must be a list or null");
  try {
    DailyDosage dd;
    for (const json& ing : *it) {
      if (!ing.is_object() || !ing.contains("unit") || !ing["unit"].is_string()) {
        throw std::invalid_argument("ingredient needs min, max and unit");
      }
      dd.per_ingredient.push_back({rational_field(ing.value("min", json()), "min"),
                                   rational_field(ing.value("max", json()), "max"),
                                   ing["unit"].get<std::string>()});
    }
    p.daily_dosage = std::move(dd);
  } catch (const std::invalid_argument& e) {
    throw DataError(line_no, e.what());
  }
  return p;
}

}  // namespace sigdose
