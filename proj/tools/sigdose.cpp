// sigdose: daily dosage from medication order records.
//
//   sigdose run orders.jsonl [--format table]
//   sigdose eval annotated.jsonl [--predictions out.jsonl]
//   sigdose eval-entities annotated.jsonl
//   sigdose lexicon-check lexicon.tsv
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigdose/batch.hpp"
#include "sigdose/report.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Settings {
  std::string input = "-";
  std::string output;
  std::string lexicon_path;
  std::string format = "jsonl";
  std::string extractor = "rules";
  std::string external_path;
  std::string predictions_path;
  bool prn_min_zero = false;
};

class DataFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::istream& open_input(const std::string& path, std::unique_ptr<std::ifstream>& holder) {
  if (path.empty() || path == "-") return std::cin;
  holder = std::make_unique<std::ifstream>(path);
  if (!*holder) throw DataFailure("cannot open " + path);
  return *holder;
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw DataFailure("cannot write " + path);
  return *holder;
}

const sigdose::Lexicon& lexicon_for(const Settings& s, std::optional<sigdose::Lexicon>& holder) {
  if (s.lexicon_path.empty()) return sigdose::default_lexicon();
  try {
    holder = sigdose::load_lexicon_file(s.lexicon_path);
  } catch (const std::exception& e) {
    throw DataFailure(s.lexicon_path + ": " + e.what());
  }
  return *holder;
}

sigdose::ReportFormat format_of(const Settings& s) {
  // CLI11 already restricts the choices.
  return *sigdose::parse_report_format(s.format);
}

struct Pipeline {
  std::optional<sigdose::Lexicon> own_lexicon;
  const sigdose::Lexicon* lexicon = nullptr;
  sigdose::ExternalEntityIndex external;
  sigdose::BatchOptions options;

  explicit Pipeline(const Settings& s) {
    lexicon = &lexicon_for(s, own_lexicon);
    options.dosage.prn_min_zero = s.prn_min_zero;
    if (s.extractor == "external") {
      if (s.external_path.empty()) throw CLI::ValidationError("--extractor external needs --external-entities");
      std::unique_ptr<std::ifstream> file;
      external = sigdose::load_external_entities(open_input(s.external_path, file));
      options.extractor = sigdose::ExtractorKind::External;
      options.external_entities = &external;
    }
  }
};

int run(const Settings& s) {
  Pipeline pipeline(s);
  std::unique_ptr<std::ifstream> in_file;
  std::unique_ptr<std::ofstream> out_file;
  std::istream& in = open_input(s.input, in_file);
  std::ostream& out = open_output(s.output, out_file);
  auto format = format_of(s);

  std::vector<sigdose::BatchItem> table;
  auto stats = sigdose::run_batch(in, *pipeline.lexicon, pipeline.options, [&](const sigdose::BatchItem& item) {
    if (format == sigdose::ReportFormat::Jsonl) {
      out << sigdose::to_jsonl(item) << '\n';
    } else {
      table.push_back(item);
    }
    if (!item.outcome.diagnostics.empty() && item.outcome.null_reason == sigdose::ReasonCode::ParseFailure) {
      std::cerr << "sigdose: " << item.outcome.diagnostics.back() << '\n';
    }
  });
  if (format == sigdose::ReportFormat::Table) sigdose::report_outcomes(out, table, format);
  out.flush();
  return stats.malformed ? kDataError : 0;
}

struct Scored {
  std::vector<sigdose::Prediction> predictions;
  std::vector<sigdose::GroundTruthRecord> truth;
  std::vector<sigdose::EntityAnnotation> predicted_entities;
  std::vector<sigdose::EntityAnnotation> truth_entities;
  bool has_entity_truth = false;
};

Scored collect(const Settings& s, bool need_dosage_truth) {
  Pipeline pipeline(s);
  std::unique_ptr<std::ifstream> in_file;
  std::istream& in = open_input(s.input, in_file);

  Scored scored;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = sigdose::parse_input_record(line, line_no, *pipeline.lexicon);
    if (!record.error.empty()) throw DataFailure(record.error);
    if (!record.truth) throw DataFailure("line " + std::to_string(line_no) + ": no ground truth fields");
    const auto& truth = *record.truth;
    if (need_dosage_truth && !truth.daily_dosage && !truth.no_dd_reason) {
      throw DataFailure("line " + std::to_string(line_no) + ": needs gt_max_dd/gt_unit or gt_no_dd_reason");
    }
    scored.truth.push_back(truth);
    for (const auto& span : truth.da_spans) {
      scored.truth_entities.push_back({truth.order_id, sigdose::CompoundKind::DosagePerAdministration, span.start, span.end});
    }
    for (const auto& span : truth.af_spans) {
      scored.truth_entities.push_back({truth.order_id, sigdose::CompoundKind::AdministrationFrequency, span.start, span.end});
    }
    scored.has_entity_truth = scored.has_entity_truth || !truth.da_spans.empty() || !truth.af_spans.empty();

    auto item = sigdose::process_record(record, *pipeline.lexicon, pipeline.options);
    for (const auto& da : item.extraction.das) {
      scored.predicted_entities.push_back({item.order_id, da.kind, da.span.start, da.span.end});
    }
    for (const auto& af : item.extraction.afs) {
      scored.predicted_entities.push_back({item.order_id, af.kind, af.span.start, af.span.end});
    }
    if (s.predictions_path.empty()) scored.predictions.push_back({item.order_id, item.outcome.value});
  }

  if (!s.predictions_path.empty()) {
    std::unique_ptr<std::ifstream> file;
    std::istream& preds = open_input(s.predictions_path, file);
    line_no = 0;
    while (std::getline(preds, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      scored.predictions.push_back(sigdose::parse_prediction(line, line_no));
    }
  }
  return scored;
}

int eval(const Settings& s) {
  Scored scored = collect(s, true);
  auto report = sigdose::score_end_to_end(scored.predictions, scored.truth);
  if (scored.has_entity_truth) report.entity_level = sigdose::score_entities(scored.predicted_entities, scored.truth_entities);
  std::unique_ptr<std::ofstream> out_file;
  sigdose::report_eval(open_output(s.output, out_file), report, format_of(s));
  return 0;
}

int eval_entities(const Settings& s) {
  Scored scored = collect(s, false);
  sigdose::EvalReport report;
  report.entity_level = sigdose::score_entities(scored.predicted_entities, scored.truth_entities);
  std::unique_ptr<std::ofstream> out_file;
  std::ostream& out = open_output(s.output, out_file);
  if (format_of(s) == sigdose::ReportFormat::Jsonl) {
    for (const auto& e : report.entity_level) {
      out << "{\"kind\":\"" << sigdose::to_string(e.kind) << "\",\"tp\":" << e.tp << ",\"fp\":" << e.fp
          << ",\"fn\":" << e.fn << ",\"precision\":\"" << sigdose::to_string(e.precision) << "\",\"recall\":\""
          << sigdose::to_string(e.recall) << "\",\"f1\":\"" << sigdose::to_string(e.f1) << "\"}\n";
    }
  } else {
    out << "entity  tp  fp  fn  precision  recall  f1\n";
    for (const auto& e : report.entity_level) {
      out << (e.kind == sigdose::CompoundKind::DosagePerAdministration ? "DA      " : "AF      ") << e.tp << "  "
          << e.fp << "  " << e.fn << "  " << sigdose::to_double(e.precision) << "  " << sigdose::to_double(e.recall)
          << "  " << sigdose::to_double(e.f1) << '\n';
    }
  }
  return 0;
}

int lexicon_check(const std::string& path) {
  sigdose::Lexicon lexicon = [&] {
    try {
      return sigdose::load_lexicon_file(path);
    } catch (const std::exception& e) {
      throw DataFailure(path + ": " + e.what());
    }
  }();
  std::cout << path << ": " << lexicon.size() << " entries\n";
  for (auto type : {sigdose::BasicEntityType::NumericalValue, sigdose::BasicEntityType::Form,
                    sigdose::BasicEntityType::Units, sigdose::BasicEntityType::Route,
                    sigdose::BasicEntityType::Frequency, sigdose::BasicEntityType::FrequencyMod}) {
    std::cout << "  " << sigdose::to_string(type) << ": " << lexicon.count(type) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Daily dosage extraction from medication Sigs"};
  app.require_subcommand(1);
  Settings s;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", s.input, "Input records (jsonl), '-' for stdin");
    cmd->add_option("--lexicon", s.lexicon_path, "Lexicon file (default: built in)")->check(CLI::ExistingFile);
    cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"jsonl", "table"}));
    cmd->add_option("--extractor", s.extractor, "Entity extractor")->check(CLI::IsMember({"rules", "external"}));
    cmd->add_option("--external-entities", s.external_path, "Entity spans for --extractor external");
    cmd->add_option("-o,--output", s.output, "Output file (default: stdout)");
    cmd->add_flag("--prn-min-zero", s.prn_min_zero, "Report a minimum of 0 for as-needed orders");
  };

  auto* run_cmd = app.add_subcommand("run", "Compute daily dosage for each record");
  add_common(run_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "Score daily dosage against gt_* fields");
  add_common(eval_cmd);
  eval_cmd->add_option("--predictions", s.predictions_path, "Score this 'run' output instead of running the pipeline");
  auto* entities_cmd = app.add_subcommand("eval-entities", "Strict span scoring of DA and AF entities");
  add_common(entities_cmd);
  std::string lexicon_path;
  auto* check_cmd = app.add_subcommand("lexicon-check", "Validate a lexicon file");
  check_cmd->add_option("path", lexicon_path, "Lexicon file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd) return run(s);
    if (*eval_cmd) return eval(s);
    if (*entities_cmd) return eval_entities(s);
    if (*check_cmd) return lexicon_check(lexicon_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "sigdose: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "sigdose: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
