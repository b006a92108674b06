#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigdose/dosage.hpp"
#include "sigdose/extraction.hpp"
#include "sigdose/lexicon.hpp"
#include "sigdose/medorder.hpp"
#include "sigdose/scoring.hpp"

namespace sigdose {

/// Bad input data, with the 1-based line it came from.
class DataError : public std::runtime_error {
 public:
  DataError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class ExtractorKind { Rules, External };

using ExternalEntityIndex = std::unordered_map<std::string, std::vector<ExternalEntity>>;

/// Reads `{order_id, entities: [{label, start, end}]}` lines.
ExternalEntityIndex load_external_entities(std::istream& in);

/// One input line. When `error` is non-empty the record was malformed and
/// only `line` and whatever id could be read are meaningful.
struct InputRecord {
  std::size_t line = 0;
  MedicationOrder order;
  std::optional<GroundTruthRecord> truth;
  std::string error;
};

/// Fields: order_id, sig, strength, route, form; optionally gt_min_dd,
/// gt_max_dd (number or list), gt_unit (string or list), gt_no_dd_reason,
/// gt_da_span and gt_af_span ([start, end] or a list of them).
InputRecord parse_input_record(std::string_view line, std::size_t line_no, const Lexicon& lexicon);

struct BatchOptions {
  ExtractorKind extractor = ExtractorKind::Rules;
  const ExternalEntityIndex* external_entities = nullptr;
  DosageOptions dosage;
};

struct BatchItem {
  std::size_t line = 0;
  std::string order_id;
  ExtractionResult extraction;
  DosageOutcome outcome;
  std::optional<GroundTruthRecord> truth;
};

BatchItem process_record(const InputRecord& record, const Lexicon& lexicon, const BatchOptions& options);

struct BatchStats {
  std::size_t records = 0;
  std::size_t values = 0;
  std::size_t nulls = 0;
  std::size_t malformed = 0;
};

/// Reads records line by line and hands each result to `sink` in input
/// order. Blank lines are skipped. Malformed records come out as
/// ParseFailure outcomes and are counted in `malformed`.
BatchStats run_batch(std::istream& in, const Lexicon& lexicon, const BatchOptions& options,
                     const std::function<void(const BatchItem&)>& sink);

/// Machine-format record, a single line without the trailing newline.
std::string to_jsonl(const BatchItem& item);

/// Reads back a line produced by to_jsonl.
Prediction parse_prediction(std::string_view line, std::size_t line_no);

}  // namespace sigdose
