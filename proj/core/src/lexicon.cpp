#include "sigdose/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "sigdose/tokenizer.hpp"

namespace sigdose {

namespace {

constexpr std::array<std::string_view, 6> kTypeNames = {
    "NumericalValue", "Form", "Units", "Route", "Frequency", "FrequencyMod"};

std::string join_keys(std::span<const std::string> keys) {
  std::string out;
  for (const auto& k : keys) {
    if (!out.empty()) out.push_back(' ');
    out += to_lower(k);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

Rational require_rational(std::size_t line, std::string_view field, std::string_view what) {
  auto value = parse_rational(trim(field));
  if (!value) {
    throw LexiconError(line, "unparseable " + std::string(what) + " '" + std::string(field) + "'");
  }
  return *value;
}

Rational require_positive(std::size_t line, std::string_view field, std::string_view what) {
  Rational v = require_rational(line, field, what);
  if (v <= 0) throw LexiconError(line, std::string(what) + " must be positive");
  return v;
}

void require_fields(std::size_t line, const std::vector<std::string_view>& fields,
                    std::size_t min, std::size_t max, BasicEntityType type) {
  if (fields.size() < min || fields.size() > max) {
    throw LexiconError(line, "wrong number of normalization fields for " +
                                 std::string(to_string(type)));
  }
}

Normalization parse_normalization(std::size_t line, BasicEntityType type, std::string_view norm) {
  auto fields = split(norm, ',');
  switch (type) {
    case BasicEntityType::NumericalValue: {
      require_fields(line, fields, 1, 2, type);
      Rational lo = require_rational(line, fields[0], "value");
      Rational hi = fields.size() == 2 ? require_rational(line, fields[1], "value") : lo;
      if (lo < 0 || hi < lo) throw LexiconError(line, "value range must satisfy 0 <= min <= max");
      return NumericNorm{lo, hi};
    }
    case BasicEntityType::Form:
    case BasicEntityType::Route: {
      require_fields(line, fields, 1, 1, type);
      std::string canonical = to_lower(trim(fields[0]));
      if (canonical.empty()) throw LexiconError(line, "empty canonical value");
      if (type == BasicEntityType::Form) return FormNorm{canonical};
      return RouteNorm{canonical};
    }
    case BasicEntityType::Units: {
      require_fields(line, fields, 2, 2, type);
      std::string unit = to_lower(trim(fields[0]));
      if (unit.empty()) throw LexiconError(line, "empty canonical unit");
      return UnitNorm{unit, require_positive(line, fields[1], "scale")};
    }
    case BasicEntityType::Frequency: {
      require_fields(line, fields, 2, 3, type);
      Rational period = require_positive(line, fields[0], "period_days");
      Rational count = require_positive(line, fields[1], "implicit_count");
      std::string slot = fields.size() == 3 ? to_lower(trim(fields[2])) : std::string{};
      return FrequencyNorm{period, period, count, slot};
    }
    case BasicEntityType::FrequencyMod: {
      require_fields(line, fields, 1, 1, type);
      return FrequencyModNorm{require_positive(line, fields[0], "multiplier")};
    }
  }
  throw LexiconError(line, "unknown entity type");
}

}  // namespace

std::string_view to_string(BasicEntityType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

std::optional<BasicEntityType> parse_entity_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<BasicEntityType>(i);
  }
  return std::nullopt;
}

std::string LexiconEntry::surface_text() const { return join_keys(surface); }

void Lexicon::add(LexiconEntry entry) {
  if (entry.surface.empty()) throw std::invalid_argument("lexicon entry has an empty surface");
  if (type_of(entry.normalization) != entry.type) {
    throw std::invalid_argument("normalization does not match entity type");
  }
  std::string key = entry.surface_text();
  auto& bucket = index_[key];
  for (std::size_t idx : bucket) {
    if (entries_[idx].type == entry.type) {
      throw std::invalid_argument("duplicate lexicon entry '" + key + "' (" +
                                  std::string(to_string(entry.type)) + ")");
    }
  }
  max_surface_length_ = std::max(max_surface_length_, entry.surface.size());
  bucket.push_back(entries_.size());
  entries_.push_back(std::move(entry));
}

std::optional<LexiconMatch> Lexicon::lookup_longest(std::span<const std::string> keys,
                                                    std::size_t start) const {
  if (start >= keys.size()) return std::nullopt;
  std::size_t longest = std::min(max_surface_length_, keys.size() - start);
  for (std::size_t len = longest; len >= 1; --len) {
    auto it = index_.find(join_keys(keys.subspan(start, len)));
    if (it == index_.end()) continue;
    LexiconMatch match;
    match.length = len;
    for (std::size_t idx : it->second) match.candidates.push_back(&entries_[idx]);
    std::sort(match.candidates.begin(), match.candidates.end(),
              [](const LexiconEntry* a, const LexiconEntry* b) { return a->type < b->type; });
    return match;
  }
  return std::nullopt;
}

const LexiconEntry* Lexicon::find(std::string_view surface, BasicEntityType type) const {
  std::vector<std::string> keys;
  for (auto& t : tokenize(surface)) keys.push_back(t.key);
  auto it = index_.find(join_keys(keys));
  if (it == index_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    if (entries_[idx].type == type) return &entries_[idx];
  }
  return nullptr;
}

std::size_t Lexicon::count(BasicEntityType type) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [type](const LexiconEntry& e) { return e.type == type; }));
}

Lexicon load_lexicon(std::string_view source) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    std::string_view line = source.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? source.size() + 1 : nl + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    auto columns = split(line, '\t');
    if (columns.size() < 3) {
      throw LexiconError(line_no, "expected at least 3 tab-separated columns, got " +
                                      std::to_string(columns.size()));
    }
    auto type = parse_entity_type(trim(columns[1]));
    if (!type) throw LexiconError(line_no, "unknown entity type '" + std::string(columns[1]) + "'");

    std::string norm(trim(columns[2]));
    for (std::size_t c = 3; c < columns.size(); ++c) norm += "," + std::string(trim(columns[c]));

    LexiconEntry entry;
    for (auto& t : tokenize(trim(columns[0]))) entry.surface.push_back(t.key);
    if (entry.surface.empty()) throw LexiconError(line_no, "empty surface");
    entry.type = *type;
    entry.normalization = parse_normalization(line_no, *type, norm);
    try {
      lexicon.add(std::move(entry));
    } catch (const std::invalid_argument& e) {
      throw LexiconError(line_no, e.what());
    }
  }
  return lexicon;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_lexicon(buffer.str());
}

std::optional<std::pair<Rational, Rational>> parse_numeric_token(std::string_view token) {
  if (token.empty()) return std::nullopt;

  // word(1) restatement: the parenthesized literal wins
  if (token.back() == ')') {
    auto open = token.rfind('(');
    if (open == std::string_view::npos) return std::nullopt;
    std::string_view head = token.substr(0, open);
    std::string_view inner = token.substr(open + 1, token.size() - open - 2);
    bool word_head = std::all_of(head.begin(), head.end(), [](unsigned char c) {
      return std::isalpha(c) != 0;
    });
    if (!word_head) return std::nullopt;
    return parse_numeric_token(inner);
  }

  auto dash = token.find('-');
  if (dash == std::string_view::npos) {
    auto v = parse_rational(token);
    if (!v) return std::nullopt;
    return std::make_pair(*v, *v);
  }
  auto lo = parse_rational(token.substr(0, dash));
  auto hi = parse_rational(token.substr(dash + 1));
  if (!lo || !hi || *hi < *lo) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

}  // namespace sigdose
