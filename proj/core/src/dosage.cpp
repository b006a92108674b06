#include "sigdose/dosage.hpp"

#include <algorithm>
#include <array>

namespace sigdose {

namespace {

constexpr std::array<std::string_view, 11> kReasonNames = {
    "NeedMoreInfo_Uninformative", "NeedMoreInfo_MissingFrequency", "NeedMoreInfo_MissingDose",
    "NeedMoreInfo_Conflicting",   "VariableDoseOverDays",          "NotMeaningful_NonRoutine",
    "NotMeaningful_OneTime",      "SubWeeklyFrequency",            "UnquantifiableForm",
    "StrengthUnavailable",        "ParseFailure"};

// Forms that are not measured by count, and routes where a bare count
// ("1 drop", "apply twice daily") has no standard amount.
bool unquantifiable_form(std::string_view form) {
  static constexpr std::array<std::string_view, 9> forms = {
      "cream", "gel", "ointment", "lotion", "foam", "paste", "shampoo", "drop", "application"};
  return std::find(forms.begin(), forms.end(), form) != forms.end();
}

bool unquantifiable_route(std::string_view route) {
  return route == "topical" || route == "ophthalmic";
}

bool has_break_between(const ExtractionResult& r, std::size_t from, std::size_t to) {
  if (to < from) std::swap(from, to);
  return std::any_of(r.tokens.begin(), r.tokens.end(), [&](const Token& t) {
    return t.start >= from && t.end <= to && (t.key == "." || t.key == ";");
  });
}

bool conjoined_between(const ExtractionResult& r, std::size_t from, std::size_t to) {
  return std::any_of(r.tokens.begin(), r.tokens.end(), [&](const Token& t) {
    return t.start >= from && t.end <= to && (t.key == "and" || t.key == "plus" || t.key == "&");
  });
}

std::vector<std::string> sig_routes(const ExtractionResult& r) {
  std::vector<std::string> routes;
  for (const auto& b : r.basics) {
    if (b.type == BasicEntityType::Route) routes.push_back(std::get<RouteNorm>(b.normalization).route);
  }
  return routes;
}

std::string note_for_marker(const ExtractionResult& r, MarkerKind kind) {
  for (const auto& m : r.markers) {
    if (m.kind == kind) return std::string(to_string(kind)) + " marker '" + m.span.text + "'";
  }
  return {};
}

}  // namespace

std::string_view to_string(ReasonCode code) { return kReasonNames[static_cast<std::size_t>(code)]; }

std::optional<ReasonCode> parse_reason_code(std::string_view name) {
  for (std::size_t i = 0; i < kReasonNames.size(); ++i) {
    if (kReasonNames[i] == name) return static_cast<ReasonCode>(i);
  }
  return std::nullopt;
}

bool same_value(const NormalizedDE& a, const NormalizedDE& b) {
  return a.da_min == b.da_min && a.da_max == b.da_max && a.da_is_unit_based == b.da_is_unit_based &&
         a.da_unit == b.da_unit && a.af_per_day_min == b.af_per_day_min &&
         a.af_per_day_max == b.af_per_day_max;
}

FrequencyRate normalize_af(const ExtractionResult& r, const CompoundEntity& af) {
  Rational nv_min{1}, nv_max{1}, modifier{1};
  bool has_nv = false;
  const FrequencyNorm* primary = nullptr;
  FrequencyRate rate;
  bool all_slotted = true;
  for (std::size_t p : af.parts) {
    const BasicEntity& b = r.basics[p];
    switch (b.type) {
      case BasicEntityType::NumericalValue:
        if (!has_nv) {
          const auto& nv = std::get<NumericNorm>(b.normalization);
          nv_min = nv.min;
          nv_max = nv.max;
          has_nv = true;
        }
        break;
      case BasicEntityType::FrequencyMod:
        modifier *= std::get<FrequencyModNorm>(b.normalization).multiplier;
        break;
      case BasicEntityType::Frequency: {
        const auto& f = std::get<FrequencyNorm>(b.normalization);
        if (!primary) primary = &f;
        if (rate.slot.empty()) rate.slot = f.slot;
        all_slotted = all_slotted && !f.slot.empty();
        break;
      }
      default:
        break;
    }
  }
  if (!primary) {
    // An AF always owns a frequency; keep the arithmetic total anyway.
    rate.per_day_min = rate.per_day_max = 0;
    rate.period_days = 1;
    return rate;
  }
  rate.per_day_min = nv_min * primary->implicit_count * modifier / primary->period_max;
  rate.per_day_max = nv_max * primary->implicit_count * modifier / primary->period_min;
  rate.period_days = primary->period_max;
  rate.slot_only = all_slotted && !has_nv;
  return rate;
}

NormalizedDE normalize_de(const ExtractionResult& r, std::size_t de_index) {
  const CompoundEntity& de = r.des.at(de_index);
  const CompoundEntity& da = r.das.at(de.parts.at(0));
  const CompoundEntity& af = r.afs.at(de.parts.at(1));

  NormalizedDE n;
  n.span = de.span;
  Rational scale{1};
  bool has_nv = false;
  for (std::size_t p : da.parts) {
    const BasicEntity& b = r.basics[p];
    if (b.type == BasicEntityType::NumericalValue && !has_nv) {
      const auto& nv = std::get<NumericNorm>(b.normalization);
      n.da_min = nv.min;
      n.da_max = nv.max;
      has_nv = true;
    } else if (b.type == BasicEntityType::Units) {
      const auto& u = std::get<UnitNorm>(b.normalization);
      n.da_is_unit_based = true;
      n.da_unit = u.unit;
      scale = u.scale;
    } else if (b.type == BasicEntityType::Form) {
      n.form = std::get<FormNorm>(b.normalization).form;
    }
  }
  n.da_min *= scale;
  n.da_max *= scale;

  FrequencyRate rate = normalize_af(r, af);
  n.af_per_day_min = rate.per_day_min;
  n.af_per_day_max = rate.per_day_max;
  n.period_days = rate.period_days;
  n.slot = rate.slot;

  if (de_index > 0) {
    n.conjoined = conjoined_between(r, r.des[de_index - 1].span.end, de.span.start);
  }
  return n;
}

std::optional<DoseTotals> combine_des(std::span<const NormalizedDE> ndes) {
  if (ndes.empty()) return std::nullopt;
  std::vector<const NormalizedDE*> kept{&ndes.front()};
  for (const NormalizedDE& d : ndes.subspan(1)) {
    const NormalizedDE& base = *kept.front();
    if (d.da_is_unit_based != base.da_is_unit_based || d.da_unit != base.da_unit) return std::nullopt;

    bool distinct_slot = !d.slot.empty() && std::all_of(kept.begin(), kept.end(), [&](auto* k) {
      return !k->slot.empty() && k->slot != d.slot;
    });
    if (d.conjoined || distinct_slot) {
      kept.push_back(&d);
    } else if (std::none_of(kept.begin(), kept.end(), [&](auto* k) { return same_value(*k, d); })) {
      return std::nullopt;
    }
  }

  DoseTotals totals;
  totals.unit_based = kept.front()->da_is_unit_based;
  totals.unit = kept.front()->da_unit;
  for (const NormalizedDE* k : kept) {
    totals.min_per_day += k->da_min * k->af_per_day_min;
    totals.max_per_day += k->da_max * k->af_per_day_max;
    if (totals.form.empty()) totals.form = k->form;
  }
  return totals;
}

DosageOutcome DosageOutcome::with_value(DailyDosage dd) {
  DosageOutcome o;
  o.value = std::move(dd);
  return o;
}

DosageOutcome DosageOutcome::null(ReasonCode reason, std::string note) {
  DosageOutcome o;
  o.null_reason = reason;
  if (!note.empty()) o.diagnostics.push_back(std::move(note));
  return o;
}

DosageOutcome calculate_daily_dosage(const MedicationOrder& order, const ExtractionResult& r,
                                     const Lexicon& lexicon, const DosageOptions& options) {
  std::vector<std::string> notes = r.diagnostics;
  auto null_with = [&](ReasonCode reason, std::string note) {
    DosageOutcome o = DosageOutcome::null(reason);
    o.diagnostics = notes;
    if (!note.empty()) o.diagnostics.push_back(std::move(note));
    return o;
  };

  const bool prn = r.has_marker(MarkerKind::AsNeeded);
  if (prn) notes.push_back(note_for_marker(r, MarkerKind::AsNeeded));

  // Circumstance markers are more specific than any structural diagnosis.
  if (r.has_marker(MarkerKind::NonRoutine)) {
    return null_with(ReasonCode::NotMeaningful_NonRoutine, note_for_marker(r, MarkerKind::NonRoutine));
  }
  if (r.has_marker(MarkerKind::OneTime)) {
    return null_with(ReasonCode::NotMeaningful_OneTime, note_for_marker(r, MarkerKind::OneTime));
  }
  for (MarkerKind k : {MarkerKind::DayIndexed, MarkerKind::WeekdayList, MarkerKind::Alternating,
                       MarkerKind::Taper}) {
    if (r.has_marker(k)) return null_with(ReasonCode::VariableDoseOverDays, note_for_marker(r, k));
  }

  const std::string order_form = canonical_form(order.form, lexicon);
  std::vector<std::string> routes = sig_routes(r);
  if (auto route = canonical_route(order.route, lexicon); !route.empty()) routes.push_back(route);
  const bool route_unquantifiable =
      std::any_of(routes.begin(), routes.end(), [](const std::string& x) { return unquantifiable_route(x); });

  if (r.des.empty()) {
    if (r.has_marker(MarkerKind::AsDirected)) {
      return null_with(ReasonCode::NeedMoreInfo_Uninformative, note_for_marker(r, MarkerKind::AsDirected));
    }
    if ((!r.das.empty() || !r.afs.empty()) &&
        (unquantifiable_form(order_form) || (order_form.empty() && route_unquantifiable))) {
      return null_with(ReasonCode::UnquantifiableForm, "no countable dose for this form/route");
    }
    if (r.das.empty() && r.afs.empty()) {
      return null_with(ReasonCode::NeedMoreInfo_Uninformative, "no dose or frequency found");
    }
    if (r.afs.empty()) return null_with(ReasonCode::NeedMoreInfo_MissingFrequency, "dose without frequency");
    if (r.das.empty()) return null_with(ReasonCode::NeedMoreInfo_MissingDose, "frequency without dose");
    return null_with(ReasonCode::NeedMoreInfo_MissingFrequency, "no frequency follows the dose");
  }

  std::vector<NormalizedDE> ndes;
  for (std::size_t i = 0; i < r.des.size(); ++i) ndes.push_back(normalize_de(r, i));

  const Rational once_a_week(1, 7);
  for (const auto& n : ndes) {
    if (n.af_per_day_max < once_a_week) {
      return null_with(ReasonCode::SubWeeklyFrequency,
                       "'" + n.span.text + "' is less frequent than once a week");
    }
  }

  for (const auto& n : ndes) {
    if (n.da_is_unit_based) continue;
    bool by_form = unquantifiable_form(n.form);
    bool by_context = n.form.empty() &&
                      (unquantifiable_form(order_form) || (order_form.empty() && route_unquantifiable));
    if (by_form || by_context) {
      return null_with(ReasonCode::UnquantifiableForm, "'" + n.span.text + "' has no measurable amount");
    }
  }

  // Dose-less restatements of a frequency ("Take by mouth every 4 hours.")
  // are harmless next to a matching DE unless they sit in another sentence
  // and the DE's count differs from the one unit such a sentence implies.
  for (std::size_t a : r.unpaired_afs) {
    const CompoundEntity& af = r.afs[a];
    FrequencyRate rate = normalize_af(r, af);
    if (rate.slot_only) {
      notes.push_back("timing '" + af.span.text + "' ignored");
      continue;
    }
    auto match = std::find_if(ndes.begin(), ndes.end(), [&](const NormalizedDE& n) {
      return n.af_per_day_min == rate.per_day_min && n.af_per_day_max == rate.per_day_max;
    });
    if (match == ndes.end()) {
      return null_with(ReasonCode::NeedMoreInfo_Conflicting,
                       "frequency '" + af.span.text + "' disagrees with the dosage expressions");
    }
    bool other_sentence = has_break_between(r, af.span.end, match->span.start) ||
                          has_break_between(r, match->span.end, af.span.start);
    bool single_unit = match->da_min == 1 && match->da_max == 1;
    if (other_sentence && !match->da_is_unit_based && !single_unit) {
      return null_with(ReasonCode::NeedMoreInfo_Conflicting,
                       "'" + af.span.text + "' implies one unit per dose but '" + match->span.text +
                           "' says otherwise");
    }
    notes.push_back("duplicate frequency '" + af.span.text + "' ignored");
  }
  for (std::size_t d : r.unpaired_das) {
    notes.push_back("dose '" + r.das[d].span.text + "' has no frequency; ignored");
  }

  auto totals = combine_des(ndes);
  if (!totals) {
    return null_with(ReasonCode::NeedMoreInfo_Conflicting, "dosage expressions disagree");
  }

  // Strength is needed to turn form counts into amounts.
  std::optional<Strength> strength;
  bool strength_failed = false;
  if (!order.strength_text.empty()) {
    try {
      strength = parse_strength(order.strength_text, lexicon);
    } catch (const StrengthError& e) {
      strength_failed = true;
      notes.push_back(e.what());
    }
  }

  for (const auto& cap : r.caps) {
    std::optional<Rational> limit;
    if (cap.unit.empty()) {
      if (!totals->unit_based) limit = cap.amount;
    } else if (totals->unit_based && totals->unit == cap.unit) {
      limit = cap.amount;
    } else if (!totals->unit_based && strength && strength->ingredients.size() == 1 &&
               strength->ingredients.front().unit == cap.unit) {
      limit = cap.amount / strength->ingredients.front().amount;
    }
    if (!limit) {
      notes.push_back("cap '" + cap.span.text + "' not applicable");
      continue;
    }
    if (*limit < totals->min_per_day) {
      return null_with(ReasonCode::NeedMoreInfo_Conflicting,
                       "cap '" + cap.span.text + "' is below the minimum daily dose");
    }
    if (*limit < totals->max_per_day) {
      totals->max_per_day = *limit;
      notes.push_back("max clamped by '" + cap.span.text + "'");
    }
  }

  if (prn && options.prn_min_zero) totals->min_per_day = 0;

  DailyDosage dd;
  if (totals->unit_based) {
    dd.per_ingredient.push_back({totals->min_per_day, totals->max_per_day, totals->unit});
    if (strength && strength->ingredients.front().unit != totals->unit) {
      notes.push_back("dose unit " + totals->unit + " differs from strength unit " +
                      strength->ingredients.front().unit);
    }
  } else if (strength) {
    for (const auto& ing : strength->ingredients) {
      dd.per_ingredient.push_back({totals->min_per_day * ing.amount, totals->max_per_day * ing.amount, ing.unit});
    }
  } else if (strength_failed) {
    return null_with(ReasonCode::StrengthUnavailable, "count-based dose needs a parseable strength");
  } else {
    std::string form = !totals->form.empty() ? totals->form : (!order_form.empty() ? order_form : "dose");
    dd.per_ingredient.push_back({totals->min_per_day, totals->max_per_day, "form:" + form});
  }

  DosageOutcome outcome = DosageOutcome::with_value(std::move(dd));
  outcome.diagnostics = std::move(notes);
  for (const auto& n : ndes) outcome.contributing.push_back(n.span);
  return outcome;
}

}  // namespace sigdose
