#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sigdose/batch.hpp"
#include "sigdose/scoring.hpp"

namespace sigdose {

enum class ReportFormat { Jsonl, Table };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// Outcomes as records (jsonl) or as an aligned table followed by a
/// histogram of null reasons.
void report_outcomes(std::ostream& out, std::span<const BatchItem> items, ReportFormat format);

/// Null reason histogram lines ("  reason  count"), most frequent first.
std::string null_reason_histogram(std::span<const BatchItem> items);

void report_eval(std::ostream& out, const EvalReport& report, ReportFormat format);

}  // namespace sigdose
