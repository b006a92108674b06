#include "sigdose/extraction.hpp"

#include <algorithm>
#include <array>

#include "detail.hpp"

namespace sigdose {

namespace detail {

std::vector<std::string> token_keys(const std::vector<Token>& tokens) {
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const auto& t : tokens) keys.push_back(t.key);
  return keys;
}

namespace {

std::optional<std::pair<Rational, Rational>> lexicon_number(const std::vector<std::string>& keys,
                                                            std::size_t i, const Lexicon& lexicon,
                                                            std::size_t& length) {
  auto match = lexicon.lookup_longest(keys, i);
  if (!match) return std::nullopt;
  for (const LexiconEntry* e : match->candidates) {
    if (e->type == BasicEntityType::NumericalValue) {
      const auto& nv = std::get<NumericNorm>(e->normalization);
      length = match->length;
      return std::make_pair(nv.min, nv.max);
    }
  }
  return std::nullopt;
}

bool is_paren_number(const Token& t) {
  return t.kind == TokenKind::Number && !t.text.empty() && t.text.front() == '(';
}

}  // namespace

std::optional<Quantity> read_quantity(const std::vector<Token>& tokens,
                                      const std::vector<std::string>& keys, std::size_t i,
                                      const Lexicon& lexicon, bool allow_range) {
  if (i >= tokens.size()) return std::nullopt;
  const Token& head = tokens[i];
  Quantity q;

  if (head.kind == TokenKind::Number) {
    auto v = parse_numeric_token(head.text);
    if (!v) return std::nullopt;
    q.min = v->first;
    q.max = v->second;
    q.length = 1;
  } else {
    std::size_t len = 0;
    auto v = lexicon_number(keys, i, lexicon, len);
    if (!v) return std::nullopt;
    q.min = v->first;
    q.max = v->second;
    q.length = len;
    // "one(1)": the glued restatement is authoritative
    if (len == 1 && head.text != head.key) {
      if (auto restated = parse_numeric_token(head.text)) {
        q.min = restated->first;
        q.max = restated->second;
      }
    }
  }

  std::size_t next = i + q.length;
  if (next < tokens.size() && is_paren_number(tokens[next])) {
    if (auto restated = parse_numeric_token(tokens[next].text)) {
      q.min = restated->first;
      q.max = restated->second;
      ++q.length;
      ++next;
    }
  }

  // mixed number: "1 1/2"
  if (next < tokens.size() && q.min == q.max &&
      boost::multiprecision::denominator(q.min) == 1 && tokens[next].kind == TokenKind::Number &&
      tokens[next].text.find('/') != std::string::npos &&
      tokens[next].text.find('-') == std::string::npos) {
    if (auto frac = parse_numeric_token(tokens[next].text); frac && frac->first < 1) {
      q.min += frac->first;
      q.max = q.min;
      ++q.length;
      ++next;
    }
  }

  if (allow_range && next + 1 < tokens.size() &&
      (keys[next] == "to" || keys[next] == "or" || keys[next] == "-")) {
    if (auto upper = read_quantity(tokens, keys, next + 1, lexicon, false);
        upper && q.min <= upper->max) {
      q.max = upper->max;
      q.length += 1 + upper->length;
    }
  }

  for (std::size_t k = i; k < i + q.length; ++k) {
    if (!q.surface.empty()) q.surface.push_back(' ');
    q.surface += tokens[k].text;
  }
  return q;
}

}  // namespace detail

namespace {

using detail::Quantity;

bool is_type(const BasicEntity& b, BasicEntityType t) { return b.type == t; }

// Exact ties at equal length prefer Form > Units > Frequency > FrequencyMod
// > Route > NumericalValue.
int tie_rank(BasicEntityType t) {
  switch (t) {
    case BasicEntityType::Form: return 0;
    case BasicEntityType::Units: return 1;
    case BasicEntityType::Frequency: return 2;
    case BasicEntityType::FrequencyMod: return 3;
    case BasicEntityType::Route: return 4;
    case BasicEntityType::NumericalValue: return 5;
  }
  return 6;
}

const LexiconEntry* preferred(const LexiconMatch& match) {
  const LexiconEntry* best = nullptr;
  for (const LexiconEntry* e : match.candidates) {
    if (!best || tie_rank(e->type) < tie_rank(best->type)) best = e;
  }
  return best;
}

bool any_masked(const std::vector<bool>& masked, std::size_t from, std::size_t to) {
  for (std::size_t k = from; k < to && k < masked.size(); ++k) {
    if (masked[k]) return true;
  }
  return false;
}

std::optional<Rational> interval_unit_days(const Token& t, bool has_number) {
  static constexpr std::array<std::string_view, 5> hours = {"h", "hr", "hrs", "hour", "hours"};
  if (std::find(hours.begin(), hours.end(), t.key) != hours.end()) return Rational(1, 24);
  if (!has_number) return std::nullopt;
  if (t.key == "d" || t.key == "day" || t.key == "days") return Rational(1);
  if (t.key == "wk" || t.key == "wks" || t.key == "week" || t.key == "weeks") return Rational(7);
  if (t.key == "month" || t.key == "months") return Rational(30);
  return std::nullopt;
}

// "every 6 hours", "q4h", "q 4-6 hours", "every 2 weeks", "every hour"
std::optional<BasicEntity> interval_at(std::string_view sig, const std::vector<Token>& tokens,
                                       const std::vector<std::string>& keys,
                                       const std::vector<bool>& masked, std::size_t i,
                                       const Lexicon& lexicon) {
  const auto& k = keys[i];
  if (k != "every" && k != "q" && k != "each") return std::nullopt;
  std::size_t j = i + 1;
  auto qty = detail::read_quantity(tokens, keys, j, lexicon);
  if (qty) {
    if (qty->min <= 0) return std::nullopt;
    j += qty->length;
  }
  if (j >= tokens.size()) return std::nullopt;
  auto unit = interval_unit_days(tokens[j], qty.has_value());
  if (!unit || any_masked(masked, i, j + 1)) return std::nullopt;

  Rational lo = qty ? qty->min : Rational(1);
  Rational hi = qty ? qty->max : Rational(1);
  BasicEntity e;
  e.span = Span::of(sig, tokens[i].start, tokens[j].end);
  e.type = BasicEntityType::Frequency;
  e.normalization = FrequencyNorm{lo * *unit, hi * *unit, Rational(1), {}};
  e.token_begin = i;
  e.token_end = j + 1;
  e.surface = e.span.text;
  return e;
}

struct Gap {
  std::size_t fillers = 0;
  bool broken = false;
};

Gap gap_between(const ExtractionResult& r, const BasicEntity& a, const BasicEntity& b) {
  Gap g;
  for (std::size_t k = a.token_end; k < b.token_begin && k < r.tokens.size(); ++k) {
    if (detail::is_break_token(r.tokens[k])) g.broken = true;
    ++g.fillers;
  }
  // masked material (caps, durations) between parts is also a break
  for (const auto& cap : r.caps) {
    if (cap.span.start >= a.span.end && cap.span.end <= b.span.start) g.broken = true;
  }
  for (const auto& d : r.durations) {
    if (d.span.start >= a.span.end && d.span.end <= b.span.start) g.broken = true;
  }
  return g;
}

constexpr std::size_t kMaxFillers = 2;

bool adjacent(const ExtractionResult& r, std::size_t a, std::size_t b) {
  if (b >= r.basics.size()) return false;
  Gap g = gap_between(r, r.basics[a], r.basics[b]);
  return !g.broken && g.fillers <= kMaxFillers;
}

bool multiplicative(const ExtractionResult& r, std::size_t i) {
  const BasicEntity& b = r.basics[i];
  if (b.type != BasicEntityType::NumericalValue) return false;
  if (b.surface == "once" || b.surface == "twice" || b.surface == "thrice") return true;
  return b.token_end < r.tokens.size() && detail::is_multiplier_filler(r.tokens[b.token_end]);
}

bool plain_daily(const BasicEntity& b) {
  if (b.type != BasicEntityType::Frequency) return false;
  const auto& f = std::get<FrequencyNorm>(b.normalization);
  return f.period_min == 1 && f.period_max == 1 && f.implicit_count == 1 && f.slot.empty();
}

bool slotted(const BasicEntity& b) {
  return b.type == BasicEntityType::Frequency && !std::get<FrequencyNorm>(b.normalization).slot.empty();
}

bool af_component(const ExtractionResult& r, std::size_t i) {
  const auto& b = r.basics[i];
  return b.type == BasicEntityType::Frequency || b.type == BasicEntityType::FrequencyMod ||
         multiplicative(r, i);
}

}  // namespace

std::string_view to_string(CompoundKind kind) {
  switch (kind) {
    case CompoundKind::DosagePerAdministration: return "DosagePerAdministration";
    case CompoundKind::AdministrationFrequency: return "AdministrationFrequency";
    case CompoundKind::DosageExpression: return "DosageExpression";
  }
  return "?";
}

std::string_view to_string(MarkerKind kind) {
  switch (kind) {
    case MarkerKind::AsNeeded: return "AsNeeded";
    case MarkerKind::AsDirected: return "AsDirected";
    case MarkerKind::OneTime: return "OneTime";
    case MarkerKind::NonRoutine: return "NonRoutine";
    case MarkerKind::DayIndexed: return "DayIndexed";
    case MarkerKind::WeekdayList: return "WeekdayList";
    case MarkerKind::Alternating: return "Alternating";
    case MarkerKind::Taper: return "Taper";
  }
  return "?";
}

bool ExtractionResult::has_marker(MarkerKind kind) const {
  return std::any_of(markers.begin(), markers.end(), [kind](const Marker& m) { return m.kind == kind; });
}

ExtractionResult scan_basic(std::string_view sig, const Lexicon& lexicon) {
  ExtractionResult r;
  r.sig = std::string(sig);
  r.tokens = tokenize(sig);
  const auto keys = detail::token_keys(r.tokens);
  auto mods = detail::detect_modifiers(sig, r.tokens, lexicon);
  r.caps = std::move(mods.caps);
  r.durations = std::move(mods.durations);
  r.markers = std::move(mods.markers);

  const std::size_t n = r.tokens.size();
  std::size_t i = 0;
  while (i < n) {
    if (mods.masked[i]) {
      ++i;
      continue;
    }
    if (auto interval = interval_at(sig, r.tokens, keys, mods.masked, i, lexicon)) {
      i = interval->token_end;
      r.basics.push_back(std::move(*interval));
      continue;
    }

    auto match = lexicon.lookup_longest(keys, i);
    if (match && any_masked(mods.masked, i, i + match->length)) match.reset();
    auto qty = detail::read_quantity(r.tokens, keys, i, lexicon);
    if (qty && any_masked(mods.masked, i, i + qty->length)) qty.reset();

    const LexiconEntry* entry = match ? preferred(*match) : nullptr;
    bool use_quantity =
        qty && (!entry || qty->length > match->length ||
                (qty->length == match->length && entry->type == BasicEntityType::NumericalValue));

    BasicEntity e;
    std::size_t len = 0;
    if (use_quantity) {
      len = qty->length;
      e.type = BasicEntityType::NumericalValue;
      e.normalization = NumericNorm{qty->min, qty->max};
      e.surface = qty->surface;
      // surface of a plain lexicon word keeps its key so "twice(2)" still reads as "twice"
      if (len == 1 && r.tokens[i].kind == TokenKind::Word) e.surface = r.tokens[i].key;
    } else if (entry) {
      len = match->length;
      e.type = entry->type;
      e.normalization = entry->normalization;
      e.surface = entry->surface_text();
    } else {
      ++i;
      continue;
    }
    e.token_begin = i;
    e.token_end = i + len;
    e.span = Span::of(sig, r.tokens[i].start, r.tokens[i + len - 1].end);
    r.basics.push_back(std::move(e));
    i += len;
  }
  return r;
}

std::vector<BasicEntity> extract_basic(std::string_view sig, const Lexicon& lexicon) {
  return scan_basic(sig, lexicon).basics;
}

std::vector<CompoundEntity> assemble_da(const ExtractionResult& r) {
  std::vector<CompoundEntity> das;
  const auto& b = r.basics;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!is_type(b[i], BasicEntityType::NumericalValue) || multiplicative(r, i)) continue;
    CompoundEntity da;
    da.kind = CompoundKind::DosagePerAdministration;
    da.parts.push_back(i);
    std::size_t last = i;
    if (adjacent(r, last, last + 1) &&
        (is_type(b[last + 1], BasicEntityType::Form) || is_type(b[last + 1], BasicEntityType::Units))) {
      da.unit_based = is_type(b[last + 1], BasicEntityType::Units);
      da.parts.push_back(++last);
    }
    if (adjacent(r, last, last + 1) && is_type(b[last + 1], BasicEntityType::Route)) {
      da.parts.push_back(++last);
    }
    da.span = Span::of(r.sig, b[i].span.start, b[last].span.end);
    das.push_back(std::move(da));
    i = last;
  }
  return das;
}

std::vector<CompoundEntity> assemble_af(const ExtractionResult& r) {
  std::vector<CompoundEntity> afs;
  const auto& b = r.basics;
  std::size_t i = 0;
  while (i < b.size()) {
    if (!af_component(r, i)) {
      ++i;
      continue;
    }
    std::vector<std::size_t> parts{i};
    std::size_t cur = i;
    bool ok = true;
    while (!is_type(b[cur], BasicEntityType::Frequency)) {
      std::size_t next = cur + 1;
      if (parts.size() >= 4 || !adjacent(r, cur, next) || !af_component(r, next)) {
        ok = false;
        break;
      }
      parts.push_back(next);
      cur = next;
    }
    if (!ok) {
      ++i;
      continue;
    }

    // "daily before lunch", "at bedtime daily": a plain once-daily frequency
    // and a time-of-day slot describe one administration.
    bool single = std::all_of(parts.begin(), parts.end(), [&](std::size_t p) {
      if (!is_type(b[p], BasicEntityType::NumericalValue)) return true;
      const auto& nv = std::get<NumericNorm>(b[p].normalization);
      return nv.min == 1 && nv.max == 1;
    });
    if (single && adjacent(r, cur, cur + 1) && is_type(b[cur + 1], BasicEntityType::Frequency) &&
        ((plain_daily(b[cur]) && slotted(b[cur + 1])) || (slotted(b[cur]) && plain_daily(b[cur + 1])))) {
      parts.push_back(++cur);
    }

    CompoundEntity af;
    af.kind = CompoundKind::AdministrationFrequency;
    af.parts = std::move(parts);
    af.span = Span::of(r.sig, b[i].span.start, b[cur].span.end);
    afs.push_back(std::move(af));
    i = cur + 1;
  }
  return afs;
}

Pairing pair_des(std::string_view sig, std::span<const CompoundEntity> das,
                 std::span<const CompoundEntity> afs) {
  Pairing p;
  std::vector<bool> af_used(afs.size(), false);
  for (std::size_t d = 0; d < das.size(); ++d) {
    const std::size_t limit = d + 1 < das.size() ? das[d + 1].span.start : sig.size();
    std::optional<std::size_t> chosen;
    for (std::size_t a = 0; a < afs.size(); ++a) {
      if (af_used[a] || afs[a].span.start < das[d].span.end) continue;
      if (afs[a].span.start >= limit) break;
      chosen = a;
      break;
    }
    if (!chosen) {
      p.unpaired_das.push_back(d);
      continue;
    }
    af_used[*chosen] = true;
    CompoundEntity de;
    de.kind = CompoundKind::DosageExpression;
    de.parts = {d, *chosen};
    de.span = Span::of(sig, das[d].span.start, afs[*chosen].span.end);
    p.des.push_back(std::move(de));
  }
  for (std::size_t a = 0; a < afs.size(); ++a) {
    if (!af_used[a]) p.unpaired_afs.push_back(a);
  }
  return p;
}

namespace detail {

void finish_compounds(ExtractionResult& r) {
  auto pairing = pair_des(r.sig, r.das, r.afs);
  r.des = std::move(pairing.des);
  r.unpaired_das = std::move(pairing.unpaired_das);
  r.unpaired_afs = std::move(pairing.unpaired_afs);

  // Attach each duration to the closest preceding DE, else the first following.
  for (std::size_t k = 0; k < r.durations.size(); ++k) {
    const auto& dur = r.durations[k].span;
    std::optional<std::size_t> best;
    for (std::size_t e = 0; e < r.des.size(); ++e) {
      if (r.des[e].span.end <= dur.start) best = e;
    }
    if (!best) {
      for (std::size_t e = 0; e < r.des.size(); ++e) {
        if (r.des[e].span.start >= dur.end) {
          best = e;
          break;
        }
      }
    }
    if (best && !r.des[*best].duration) r.des[*best].duration = k;
  }
}

}  // namespace detail

ExtractionResult extract(std::string_view sig, const Lexicon& lexicon) {
  ExtractionResult r = scan_basic(sig, lexicon);
  r.das = assemble_da(r);
  r.afs = assemble_af(r);
  detail::finish_compounds(r);
  return r;
}

}  // namespace sigdose
