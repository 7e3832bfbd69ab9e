#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaseo/rank.hpp"
#include "metaseo/seo.hpp"

namespace metaseo {

// A published figure together with the rounding implied by how it was
// printed: "0.44" carries +-0.005, "0.00000074" carries +-5e-9.
struct PrintedValue {
  double value = 0.0;
  double half_unit = 0.0;
  std::string text;

  bool agrees_with(double computed) const;
};

// Throws Error(InvalidInput) for text that is not a decimal number.
PrintedValue parse_printed(std::string_view text);

struct JudgedRun {
  std::string engine;
  std::string query;
  std::uint64_t total_retrieved = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t more_relevant = 0;
  std::uint64_t less_relevant = 0;
  std::uint64_t irrelevant = 0;
  // Figures printed alongside the judgments, if any; used only to flag
  // cells whose published value disagrees with the formula.
  std::optional<PrintedValue> reported_precision;
  std::optional<PrintedValue> reported_recall;
};

// Relevant means "more relevant" only. Throws Error(EmptyRun).
double precision(const JudgedRun& run);

using EngineCounts = std::vector<std::pair<std::string, double>>;

// Each engine's count over the sum of counts. Throws Error(AllZero).
EngineCounts relative_recall(const EngineCounts& relevant_counts);

// Throws Error(Empty).
double mean_precision(std::span<const double> per_query);

struct PrecisionCell {
  std::string engine;
  std::string query;
  double precision = 0.0;
  std::optional<PrintedValue> reported;
  bool discrepancy = false;  // computed value does not round to the reported one
};

struct RecallRow {
  std::string query;
  EngineCounts counts;  // total_retrieved per engine
  EngineCounts recall;
  std::vector<std::optional<PrintedValue>> reported;  // parallel to recall
  std::vector<bool> discrepancy;
};

struct EvalReport {
  std::vector<PrecisionCell> precision;
  std::vector<RecallRow> recall;
  std::vector<std::pair<std::string, double>> mean_precision;  // engine order of first appearance
  // Mean of the reported precision cells, for engines where every cell has
  // one. Shows how a published mean follows from the published cells.
  std::vector<std::pair<std::string, double>> mean_of_reported;
};

// Relative recall is taken over the total_retrieved column, as the
// published recall table does.
EvalReport evaluate(const std::vector<JudgedRun>& runs);

// CSV: engine,query,total_retrieved,evaluated,more,less,irrelevant[,reported_precision[,reported_recall]]
// A header row is optional. Thousands separators in quoted numbers are allowed.
std::vector<JudgedRun> parse_judgments_csv(std::string_view csv);

std::string report_json(const EvalReport& report);
std::string report_text(const EvalReport& report);

// Up to 9 significant digits, shortest form.
std::string format_number(double v);

// --- SERP feature tables ------------------------------------------------------

struct FeatureRow {
  int rank = 0;
  std::string website;
  std::array<double, kSeoParamCount> values{};
};

using FeatureTable = std::vector<FeatureRow>;

FeatureTable serp_feature_table(const std::vector<RankedResult>& ranked);
std::string feature_table_csv(const FeatureTable& table);
std::string feature_table_json(const FeatureTable& table);
// Accepts the CSV written above; binary columns may also read yes/no.
FeatureTable parse_feature_table_csv(std::string_view csv);

struct ParameterImportance {
  SeoParam param = SeoParam::TitleMatch;
  double spearman = 0.0;  // against inverted rank (rank 1 = best)
  double percent = 0.0;
};

// Spearman correlation (average ranks for ties) of each column against
// inverted rank; absolute values normalized to 100%. Constant columns get 0.
// Throws Error(TooFewRows) for fewer than 3 rows.
std::vector<ParameterImportance> parameter_importance(const FeatureTable& table);

double spearman(std::span<const double> a, std::span<const double> b);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace metaseo
