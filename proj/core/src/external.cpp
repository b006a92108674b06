#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "detail.hpp"

namespace sigdose {

namespace {

constexpr std::array<std::string_view, 7> kLabelNames = {
    "Dosage", "Strength", "Form", "Frequency", "Route", "Duration", "Drug"};

// Two spans are adjacent when at most two non-break tokens separate them.
bool adjacent_text(std::string_view sig, std::size_t from, std::size_t to) {
  if (to < from) return false;
  auto between = tokenize(sig.substr(from, to - from));
  if (between.size() > 2) return false;
  return std::none_of(between.begin(), between.end(), detail::is_break_token);
}

void validate(std::string_view sig, std::span<const ExternalEntity> entities) {
  for (const auto& e : entities) {
    if (e.start >= e.end || e.end > sig.size()) {
      throw ExternalContractError("entity " + std::string(to_string(e.label)) + " [" +
                                  std::to_string(e.start) + ", " + std::to_string(e.end) +
                                  ") is outside the sig");
    }
  }
  for (std::size_t a = 0; a < entities.size(); ++a) {
    for (std::size_t b = a + 1; b < entities.size(); ++b) {
      const auto& x = entities[a];
      const auto& y = entities[b];
      if (x.label == y.label && x.start < y.end && y.start < x.end) {
        throw ExternalContractError("overlapping " + std::string(to_string(x.label)) + " spans");
      }
    }
  }
}

// Re-extract basic entities inside [start, end) and register them in the
// result, returning their indices.
std::vector<std::size_t> basics_within(ExtractionResult& r, std::size_t start, std::size_t end,
                                       const Lexicon& lexicon) {
  std::string_view sig = r.sig;
  auto local = scan_basic(sig.substr(start, end - start), lexicon);
  std::vector<std::size_t> indices;
  for (auto& b : local.basics) {
    std::size_t s = b.span.start + start;
    std::size_t e = b.span.end + start;
    auto existing = std::find_if(r.basics.begin(), r.basics.end(), [&](const BasicEntity& x) {
      return x.span.start == s && x.span.end == e && x.type == b.type;
    });
    if (existing != r.basics.end()) {
      indices.push_back(static_cast<std::size_t>(existing - r.basics.begin()));
      continue;
    }
    b.span = Span::of(sig, s, e);
    auto first = std::find_if(r.tokens.begin(), r.tokens.end(),
                              [&](const Token& t) { return t.end > s; });
    auto last = std::find_if(r.tokens.begin(), r.tokens.end(),
                             [&](const Token& t) { return t.start >= e; });
    b.token_begin = static_cast<std::size_t>(first - r.tokens.begin());
    b.token_end = static_cast<std::size_t>(last - r.tokens.begin());
    indices.push_back(r.basics.size());
    r.basics.push_back(std::move(b));
  }
  return indices;
}

// Sort basics by offset and remap compound part indices accordingly.
void sort_basics(ExtractionResult& r) {
  std::vector<std::size_t> order(r.basics.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(r.basics[a].span.start, r.basics[a].span.end) <
           std::tie(r.basics[b].span.start, r.basics[b].span.end);
  });
  std::vector<std::size_t> new_index(order.size());
  std::vector<BasicEntity> sorted;
  sorted.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    new_index[order[k]] = k;
    sorted.push_back(std::move(r.basics[order[k]]));
  }
  r.basics = std::move(sorted);
  for (auto* list : {&r.das, &r.afs}) {
    for (auto& c : *list) {
      for (auto& p : c.parts) p = new_index[p];
      std::sort(c.parts.begin(), c.parts.end());
    }
  }
}

bool has_part(const ExtractionResult& r, const std::vector<std::size_t>& parts, BasicEntityType t) {
  return std::any_of(parts.begin(), parts.end(), [&](std::size_t p) { return r.basics[p].type == t; });
}

}  // namespace

std::optional<ExternalLabel> parse_external_label(std::string_view name) {
  if (name.starts_with("n2c2_")) name.remove_prefix(5);
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<ExternalLabel>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ExternalLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

ExtractionResult external_entities_to_compound(std::string_view sig,
                                               std::span<const ExternalEntity> entities,
                                               const Lexicon& lexicon) {
  validate(sig, entities);

  ExtractionResult r;
  r.sig = std::string(sig);
  r.tokens = tokenize(sig);
  auto mods = detail::detect_modifiers(sig, r.tokens, lexicon);
  r.caps = std::move(mods.caps);
  r.durations = std::move(mods.durations);
  r.markers = std::move(mods.markers);

  std::vector<ExternalEntity> sorted(entities.begin(), entities.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const ExternalEntity& a, const ExternalEntity& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });

  std::vector<std::pair<std::size_t, std::size_t>> da_spans, af_spans;
  std::set<std::size_t> consumed;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = sorted[i];
    if (e.label == ExternalLabel::Frequency) {
      af_spans.emplace_back(e.start, e.end);
      continue;
    }
    if ((e.label != ExternalLabel::Dosage && e.label != ExternalLabel::Strength) || consumed.count(i)) {
      continue;
    }
    std::size_t end = e.end;
    std::size_t j = i + 1;
    auto next_is = [&](ExternalLabel label) {
      return j < sorted.size() && sorted[j].label == label && adjacent_text(sig, end, sorted[j].start);
    };
    if (e.label == ExternalLabel::Dosage && next_is(ExternalLabel::Form)) {
      end = sorted[j].end;
      consumed.insert(j++);
    }
    if (next_is(ExternalLabel::Route)) {
      end = sorted[j].end;
      consumed.insert(j++);
    }
    da_spans.emplace_back(e.start, end);
  }

  for (auto [start, end] : da_spans) {
    auto parts = basics_within(r, start, end, lexicon);
    if (!has_part(r, parts, BasicEntityType::NumericalValue)) {
      r.diagnostics.push_back("external DA '" + std::string(sig.substr(start, end - start)) +
                              "' has no numerical value; dropped");
      continue;
    }
    CompoundEntity da;
    da.kind = CompoundKind::DosagePerAdministration;
    da.span = Span::of(sig, start, end);
    da.parts = std::move(parts);
    da.unit_based = has_part(r, da.parts, BasicEntityType::Units);
    r.das.push_back(std::move(da));
  }
  for (auto [start, end] : af_spans) {
    auto parts = basics_within(r, start, end, lexicon);
    if (!has_part(r, parts, BasicEntityType::Frequency)) {
      r.diagnostics.push_back("external AF '" + std::string(sig.substr(start, end - start)) +
                              "' has no frequency; dropped");
      continue;
    }
    CompoundEntity af;
    af.kind = CompoundKind::AdministrationFrequency;
    af.span = Span::of(sig, start, end);
    af.parts = std::move(parts);
    r.afs.push_back(std::move(af));
  }

  sort_basics(r);
  auto by_start = [](const CompoundEntity& a, const CompoundEntity& b) {
    return a.span.start < b.span.start;
  };
  std::stable_sort(r.das.begin(), r.das.end(), by_start);
  std::stable_sort(r.afs.begin(), r.afs.end(), by_start);
  detail::finish_compounds(r);
  return r;
}

}  // namespace sigdose
