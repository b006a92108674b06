#include <algorithm>
#include <array>
#include <map>
#include <regex>
#include <set>

#include "detail.hpp"

namespace sigdose::detail {

namespace {

bool key_in(const Token& t, std::initializer_list<std::string_view> words) {
  return std::find(words.begin(), words.end(), t.key) != words.end();
}

bool key_at(const std::vector<Token>& tokens, std::size_t i,
            std::initializer_list<std::string_view> words) {
  return i < tokens.size() && key_in(tokens[i], words);
}

Span token_span(std::string_view sig, const std::vector<Token>& tokens, std::size_t first,
                std::size_t last_exclusive) {
  return Span::of(sig, tokens[first].start, tokens[last_exclusive - 1].end);
}

// Returns the number of tokens matched by `phrase` (space separated keys)
// at position i, or 0.
std::size_t match_phrase(const std::vector<std::string>& keys, std::size_t i,
                         std::string_view phrase) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < phrase.size()) {
    auto sp = phrase.find(' ', pos);
    std::string_view word = phrase.substr(pos, sp == std::string_view::npos ? sp : sp - pos);
    if (i + n >= keys.size() || keys[i + n] != word) return 0;
    ++n;
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  return n;
}

// --- daily caps ------------------------------------------------------------

constexpr std::array<std::string_view, 11> kCapOpeners = {
    "do not take more than", "don't take more than", "not to exceed", "do not exceed",
    "don't exceed", "never exceed", "no more than", "not more than", "maximum of",
    "maximum", "max"};

// Number of tokens forming a one-day period at i ("day", "24 hours", "24h").
std::size_t day_period_length(const std::vector<Token>& tokens, std::size_t i) {
  if (key_at(tokens, i, {"day", "daily", "d"})) return 1;
  if (key_at(tokens, i, {"24"}) && key_at(tokens, i + 1, {"hours", "hour", "hrs", "hr", "h"})) {
    return 2;
  }
  if (key_at(tokens, i, {"one", "1"}) && key_at(tokens, i + 1, {"day"})) return 2;
  return 0;
}

std::optional<DailyCap> cap_at(std::string_view sig, const std::vector<Token>& tokens,
                               const std::vector<std::string>& keys, std::size_t i,
                               const Lexicon& lexicon, std::size_t& end) {
  std::size_t opener = 0;
  for (auto phrase : kCapOpeners) {
    opener = match_phrase(keys, i, phrase);
    if (opener) break;
  }
  if (!opener) return std::nullopt;

  std::size_t j = i + opener;
  while (key_at(tokens, j, {"of", "dose", "daily", "dosage", "is", ":", "=", ".", "total"})) ++j;

  auto qty = read_quantity(tokens, keys, j, lexicon);
  if (!qty) return std::nullopt;
  j += qty->length;

  DailyCap cap;
  cap.amount = qty->max;
  if (auto match = lexicon.lookup_longest(keys, j)) {
    for (const LexiconEntry* e : match->candidates) {
      if (e->type == BasicEntityType::Units) {
        const auto& unit = std::get<UnitNorm>(e->normalization);
        cap.amount *= unit.scale;
        cap.unit = unit.unit;
        j += match->length;
        break;
      }
      if (e->type == BasicEntityType::Form) {
        j += match->length;
        break;
      }
    }
  }

  std::size_t connectors = 0;
  while (connectors < 2 && key_at(tokens, j, {"/", "per", "a", "in", "each", "every", "any", "within"})) {
    ++j;
    ++connectors;
  }
  std::size_t period = day_period_length(tokens, j);
  if (!period) return std::nullopt;
  end = j + period;
  cap.span = token_span(sig, tokens, i, end);
  return cap;
}

// --- durations -------------------------------------------------------------

std::optional<Rational> duration_unit_days(const Token& t) {
  if (key_in(t, {"day", "days", "d"})) return Rational(1);
  if (key_in(t, {"week", "weeks", "wk", "wks"})) return Rational(7);
  if (key_in(t, {"month", "months", "mo"})) return Rational(30);
  return std::nullopt;
}

// "for 7 days", "x 5 days", "for the next 2 weeks", "for 1 dose"
std::optional<std::size_t> duration_at(std::string_view sig, const std::vector<Token>& tokens,
                                       const std::vector<std::string>& keys, std::size_t i,
                                       const Lexicon& lexicon, Modifiers& out) {
  if (!key_at(tokens, i, {"for", "x"})) return std::nullopt;
  std::size_t j = i + 1;
  if (key_at(tokens, j, {"the"})) ++j;
  if (key_at(tokens, j, {"next"})) ++j;

  Rational lo{1}, hi{1};
  if (key_at(tokens, j, {"a", "an"})) {
    ++j;
  } else {
    auto qty = read_quantity(tokens, keys, j, lexicon);
    if (!qty) return std::nullopt;
    lo = qty->min;
    hi = qty->max;
    j += qty->length;
  }
  if (j >= tokens.size()) return std::nullopt;
  if (key_in(tokens[j], {"dose", "doses"})) return j + 1;
  auto unit = duration_unit_days(tokens[j]);
  if (!unit) return std::nullopt;
  out.durations.push_back({token_span(sig, tokens, i, j + 1), lo * *unit, hi * *unit});
  return j + 1;
}

// "day 1", "day1", "weeks 1-4", "week 5"
std::optional<std::size_t> day_index_at(const std::vector<Token>& tokens,
                                        const std::vector<std::string>& keys, std::size_t i,
                                        const Lexicon& lexicon) {
  if (!key_at(tokens, i, {"day", "days", "week", "weeks", "wk"})) return std::nullopt;
  if (i > 0 && key_in(tokens[i - 1], {"every", "q", "each", "a", "per", "/", "other", "the"})) {
    return std::nullopt;
  }
  if (i + 1 >= tokens.size() || tokens[i + 1].kind != TokenKind::Number) return std::nullopt;
  auto qty = read_quantity(tokens, keys, i + 1, lexicon);
  if (!qty) return std::nullopt;
  return i + 1 + qty->length;
}

const std::map<std::string_view, int>& weekday_index() {
  static const std::map<std::string_view, int> days = {
      {"mon", 1},   {"monday", 1},   {"tue", 2},    {"tues", 2},   {"tuesday", 2},
      {"wed", 3},   {"weds", 3},     {"wednesday", 3}, {"thu", 4}, {"thur", 4},
      {"thurs", 4}, {"thursday", 4}, {"fri", 5},    {"friday", 5}, {"sat", 6},
      {"saturday", 6}, {"sun", 7},   {"sunday", 7}};
  return days;
}

// --- phrase markers ----------------------------------------------------------

// std::regex is slow; a rule only runs when one of its cue substrings occurs.
struct PhraseRule {
  MarkerKind kind;
  std::vector<std::string_view> cues;
  std::regex pattern;
};

const std::vector<PhraseRule>& phrase_rules() {
  using std::regex;
  static const std::vector<PhraseRule> rules = [] {
    auto opts = regex::ECMAScript | regex::optimize;
    std::vector<PhraseRule> r;
    r.push_back({MarkerKind::AsNeeded, {"need", "necessary", "prn", "p.r.n"},
                 regex(R"(\b(as\s+needed|as\s+necessary|if\s+needed|when\s+needed|prn)\b|\bp\.r\.n\b)",
                       opts)});
    r.push_back({MarkerKind::AsDirected, {"as", "per", "see"},
                 regex(R"(\bas\s+(directed|instructed|advised)\b|\bper\s+(instructions|protocol|package\s+insert)\b|\bsee\s+(instructions|attached)\b)",
                       opts)});
    r.push_back({MarkerKind::NonRoutine, {"prior", "before", "ahead", "advance", "onset", "sign"},
                 regex(R"(\b(prior\s+to|before|ahead\s+of|in\s+advance\s+of)\s+(the\s+|your\s+|a\s+|an\s+|each\s+)?(procedure|surgery|operation|sexual\s+intercourse|sexual\s+activity|intercourse|sex|dental|mri|ct|scan|colonoscopy|flight|flying|travel|appointment|exam|examination|test|dialysis|imaging)\b|\bonset\s+of\b|\bfirst\s+sign\s+of\b)",
                       opts)});
    r.push_back({MarkerKind::OneTime, {"time", "once", "single", "dose", "stat"},
                 regex(R"(\b(one|1)\s*-?\s*time\s+(only|dose)\b|\bonce\s+only\b|\bsingle\s+dose\b|\b(for|x)\s*(one|1)\s+dose\b|\bone\s+dose\s+only\b|\bstat\b)",
                       opts)});
    r.push_back({MarkerKind::Alternating, {"alternat"},
                 regex(R"(\balternat(e|es|ing)\b(?!\s+(days?|mornings?|evenings?|nights?|weeks?|nostrils?|eyes?|sides?|arms?|legs?|sites?|thighs?)\b))",
                       opts)});
    r.push_back({MarkerKind::Taper, {"taper", "decrease", "reduce", "increase"},
                 regex(R"(\btaper(s|ed|ing)?\b|\bthen\s+(decrease|reduce|increase|titrate|taper)\b|\b(decrease|reduce|increase)\s+(the\s+)?(dose\s+)?by\b)",
                       opts)});
    return r;
  }();
  return rules;
}

}  // namespace

Modifiers detect_modifiers(std::string_view sig, const std::vector<Token>& tokens,
                           const Lexicon& lexicon) {
  Modifiers out;
  out.masked.assign(tokens.size(), false);
  const auto keys = token_keys(tokens);

  auto mask = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to; ++k) out.masked[k] = true;
  };

  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t end = 0;
    if (auto cap = cap_at(sig, tokens, keys, i, lexicon, end)) {
      out.caps.push_back(*cap);
      mask(i, end);
      i = end;
      continue;
    }
    if (auto dur_end = duration_at(sig, tokens, keys, i, lexicon, out)) {
      mask(i, *dur_end);
      i = *dur_end;
      continue;
    }
    if (auto idx_end = day_index_at(tokens, keys, i, lexicon)) {
      out.markers.push_back({MarkerKind::DayIndexed, token_span(sig, tokens, i, *idx_end)});
      mask(i, *idx_end);
      i = *idx_end;
      continue;
    }
    ++i;
  }

  std::set<int> weekdays;
  std::optional<std::size_t> first_day, last_day;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = weekday_index().find(tokens[i].key);
    if (it == weekday_index().end()) continue;
    weekdays.insert(it->second);
    if (!first_day) first_day = i;
    last_day = i;
  }
  if (weekdays.size() >= 2) {
    out.markers.push_back({MarkerKind::WeekdayList, token_span(sig, tokens, *first_day, *last_day + 1)});
  }

  const std::string lowered = to_lower(sig);
  for (const auto& rule : phrase_rules()) {
    if (std::none_of(rule.cues.begin(), rule.cues.end(),
                     [&](std::string_view cue) { return lowered.find(cue) != std::string::npos; })) {
      continue;
    }
    for (auto it = std::sregex_iterator(lowered.begin(), lowered.end(), rule.pattern);
         it != std::sregex_iterator(); ++it) {
      auto start = static_cast<std::size_t>(it->position(0));
      auto len = static_cast<std::size_t>(it->length(0));
      if (len == 0) continue;
      out.markers.push_back({rule.kind, Span::of(sig, start, start + len)});
    }
  }

  std::stable_sort(out.markers.begin(), out.markers.end(),
                   [](const Marker& a, const Marker& b) { return a.span.start < b.span.start; });
  return out;
}

bool is_break_token(const Token& token) {
  return key_in(token, {".", ";", "and", "&", "then", "plus"});
}

bool is_multiplier_filler(const Token& token) {
  return key_in(token, {"times", "time", "x"});
}

}  // namespace sigdose::detail
