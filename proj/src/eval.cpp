#include "metaseo/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metaseo/error.hpp"
#include "metaseo/text.hpp"

namespace metaseo {
namespace {

using ordered_json = nlohmann::ordered_json;

double rounded(double v) { return std::stod(format_number(v)); }

std::uint64_t parse_count(std::string_view field, const char* what) {
  std::string digits;
  for (char c : text::trim(field)) {
    if (c == ',' || c == '_' || c == ' ') continue;
    digits += c;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::InvalidInput, std::string("bad ") + what + " value '" + std::string(field) + "'");
  }
  return v;
}

double parse_real(std::string_view field) {
  std::string s(text::trim(field));
  auto lower = text::to_lower_ascii(s);
  if (lower == "yes" || lower == "y" || lower == "true") return 1.0;
  if (lower == "no" || lower == "n" || lower == "false") return 0.0;
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidInput, "bad numeric value '" + std::string(field) + "'");
}

template <typename T>
std::size_t index_of(std::vector<T>& seen, const T& v) {
  auto it = std::find(seen.begin(), seen.end(), v);
  if (it != seen.end()) return static_cast<std::size_t>(it - seen.begin());
  seen.push_back(v);
  return seen.size() - 1;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

bool PrintedValue::agrees_with(double computed) const {
  // A hair of slack so that exact half-unit cases survive binary rounding.
  return std::abs(computed - value) <= half_unit * (1.0 + 1e-9);
}

PrintedValue parse_printed(std::string_view text) {
  std::string s(text::trim(text));
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  PrintedValue p;
  p.text = s;
  try {
    std::size_t used = 0;
    p.value = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(p.value)) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad printed value '" + std::string(text) + "'");
  }
  auto e = s.find_first_of("eE");
  std::string_view mantissa = std::string_view(s).substr(0, e);
  int exponent = e == std::string::npos ? 0 : std::stoi(s.substr(e + 1));
  auto dot = mantissa.find('.');
  int decimals = dot == std::string_view::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  p.half_unit = 0.5 * std::pow(10.0, exponent - decimals);
  return p;
}

double precision(const JudgedRun& run) {
  if (run.evaluated == 0) throw Error(ErrorCode::EmptyRun, "run for " + run.engine + " evaluated no documents");
  return static_cast<double>(run.more_relevant) / static_cast<double>(run.evaluated);
}

EngineCounts relative_recall(const EngineCounts& relevant_counts) {
  double total = 0.0;
  for (const auto& [engine, count] : relevant_counts) {
    if (count < 0 || !std::isfinite(count)) throw Error(ErrorCode::InvalidInput, "negative count for " + engine);
    total += count;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::AllZero, "relative recall needs a positive total");
  EngineCounts out;
  out.reserve(relevant_counts.size());
  for (const auto& [engine, count] : relevant_counts) out.emplace_back(engine, count / total);
  return out;
}

double mean_precision(std::span<const double> per_query) {
  if (per_query.empty()) throw Error(ErrorCode::Empty, "mean of no precision values");
  return std::accumulate(per_query.begin(), per_query.end(), 0.0) / static_cast<double>(per_query.size());
}

EvalReport evaluate(const std::vector<JudgedRun>& runs) {
  EvalReport report;
  std::vector<std::string> engines;
  std::vector<std::string> queries;
  for (const auto& r : runs) {
    index_of(engines, r.engine);
    index_of(queries, r.query);
  }

  std::vector<std::vector<double>> per_engine(engines.size());
  std::vector<std::vector<double>> reported(engines.size());
  std::vector<bool> all_reported(engines.size(), true);
  for (const auto& r : runs) {
    PrecisionCell cell;
    cell.engine = r.engine;
    cell.query = r.query;
    cell.precision = precision(r);
    cell.reported = r.reported_precision;
    cell.discrepancy = r.reported_precision && !r.reported_precision->agrees_with(cell.precision);
    auto e = index_of(engines, r.engine);
    per_engine[e].push_back(cell.precision);
    if (r.reported_precision) reported[e].push_back(r.reported_precision->value);
    else all_reported[e] = false;
    report.precision.push_back(std::move(cell));
  }
  for (std::size_t e = 0; e < engines.size(); ++e) {
    report.mean_precision.emplace_back(engines[e], mean_precision(per_engine[e]));
    if (all_reported[e]) report.mean_of_reported.emplace_back(engines[e], mean_precision(reported[e]));
  }
  for (const auto& q : queries) {
    RecallRow row;
    row.query = q;
    for (const auto& r : runs) {
      if (r.query != q) continue;
      row.counts.emplace_back(r.engine, static_cast<double>(r.total_retrieved));
      row.reported.push_back(r.reported_recall);
    }
    row.recall = relative_recall(row.counts);
    for (std::size_t i = 0; i < row.recall.size(); ++i) {
      row.discrepancy.push_back(row.reported[i] && !row.reported[i]->agrees_with(row.recall[i].second));
    }
    report.recall.push_back(std::move(row));
  }
  return report;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<JudgedRun> parse_judgments_csv(std::string_view csv) {
  std::vector<JudgedRun> runs;
  auto rows = parse_csv(csv);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (i == 0 && !f.empty() && text::to_lower_ascii(text::trim(f[0])) == "engine") continue;
    if (f.size() < 7 || f.size() > 9) {
      throw Error(ErrorCode::InvalidInput, "judgments row " + std::to_string(i + 1) + " has " +
                                               std::to_string(f.size()) + " fields, expected 7 to 9");
    }
    JudgedRun r;
    r.engine = std::string(text::trim(f[0]));
    r.query = std::string(text::trim(f[1]));
    r.total_retrieved = parse_count(f[2], "total_retrieved");
    r.evaluated = parse_count(f[3], "evaluated");
    r.more_relevant = parse_count(f[4], "more");
    r.less_relevant = parse_count(f[5], "less");
    r.irrelevant = parse_count(f[6], "irrelevant");
    if (f.size() >= 8 && !text::trim(f[7]).empty()) r.reported_precision = parse_printed(f[7]);
    if (f.size() >= 9 && !text::trim(f[8]).empty()) r.reported_recall = parse_printed(f[8]);
    if (r.more_relevant + r.less_relevant + r.irrelevant > r.evaluated) {
      throw Error(ErrorCode::InvalidInput, "judged counts exceed evaluated on row " + std::to_string(i + 1));
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string report_json(const EvalReport& report) {
  ordered_json j;
  j["precision"] = ordered_json::array();
  for (const auto& c : report.precision) {
    ordered_json cell;
    cell["engine"] = c.engine;
    cell["query"] = c.query;
    cell["precision"] = rounded(c.precision);
    cell["reported"] = c.reported ? ordered_json(rounded(c.reported->value)) : ordered_json(nullptr);
    cell["discrepancy"] = c.discrepancy;
    j["precision"].push_back(std::move(cell));
  }
  j["mean_precision"] = ordered_json::object();
  for (const auto& [engine, mean] : report.mean_precision) j["mean_precision"][engine] = rounded(mean);
  j["mean_of_reported"] = ordered_json::object();
  for (const auto& [engine, mean] : report.mean_of_reported) j["mean_of_reported"][engine] = rounded(mean);
  j["relative_recall"] = ordered_json::array();
  for (const auto& row : report.recall) {
    ordered_json r;
    r["query"] = row.query;
    r["engines"] = ordered_json::array();
    for (std::size_t i = 0; i < row.recall.size(); ++i) {
      ordered_json e;
      e["engine"] = row.recall[i].first;
      e["count"] = rounded(row.counts[i].second);
      e["relative_recall"] = rounded(row.recall[i].second);
      e["reported"] = row.reported[i] ? ordered_json(rounded(row.reported[i]->value)) : ordered_json(nullptr);
      e["discrepancy"] = static_cast<bool>(row.discrepancy[i]);
      r["engines"].push_back(std::move(e));
    }
    j["relative_recall"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "Precision\n";
  for (const auto& c : report.precision) {
    out << "  " << c.engine << " | " << c.query << " | " << format_number(c.precision);
    if (c.reported) {
      out << " (reported " << c.reported->text << (c.discrepancy ? ", DISCREPANCY" : "") << ")";
    }
    out << "\n";
  }
  out << "Mean precision\n";
  for (const auto& [engine, mean] : report.mean_precision) {
    out << "  " << engine << " | " << format_number(mean);
    for (const auto& [name, m] : report.mean_of_reported) {
      if (name == engine) out << " (mean of reported cells " << format_number(m) << ")";
    }
    out << "\n";
  }
  out << "Relative recall\n";
  for (const auto& row : report.recall) {
    out << "  " << row.query << "\n";
    for (std::size_t i = 0; i < row.recall.size(); ++i) {
      out << "    " << row.recall[i].first << " | " << format_number(row.recall[i].second);
      if (row.reported[i]) {
        out << " (reported " << row.reported[i]->text << (row.discrepancy[i] ? ", DISCREPANCY" : "")
            << ")";
      }
      out << "\n";
    }
  }
  return out.str();
}

// --- feature tables ----------------------------------------------------------

FeatureTable serp_feature_table(const std::vector<RankedResult>& ranked) {
  FeatureTable table;
  table.reserve(ranked.size());
  for (const auto& r : ranked) {
    FeatureRow row;
    row.rank = r.final_rank;
    std::string_view site = r.canonical_url;
    if (auto p = site.find("://"); p != std::string_view::npos) site.remove_prefix(p + 3);
    row.website = std::string(site);
    row.values = r.features.values();
    table.push_back(std::move(row));
  }
  return table;
}

std::string feature_table_csv(const FeatureTable& table) {
  std::string out = "rank,website";
  for (std::size_t i = 0; i < kSeoParamCount; ++i) {
    out += ',';
    out += param_name(static_cast<SeoParam>(i));
  }
  out += '\n';
  for (const auto& row : table) {
    out += std::to_string(row.rank);
    out += ',';
    out += csv_field(row.website);
    for (double v : row.values) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string feature_table_json(const FeatureTable& table) {
  ordered_json j = ordered_json::array();
  for (const auto& row : table) {
    ordered_json r;
    r["rank"] = row.rank;
    r["website"] = row.website;
    for (std::size_t i = 0; i < kSeoParamCount; ++i) {
      r[std::string(param_name(static_cast<SeoParam>(i)))] = rounded(row.values[i]);
    }
    j.push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

FeatureTable parse_feature_table_csv(std::string_view csv) {
  FeatureTable table;
  auto rows = parse_csv(csv);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (i == 0 && !f.empty() && text::to_lower_ascii(text::trim(f[0])) == "rank") continue;
    if (f.size() != 2 + kSeoParamCount) {
      throw Error(ErrorCode::InvalidInput, "feature table row " + std::to_string(i + 1) + " has " +
                                               std::to_string(f.size()) + " fields, expected 11");
    }
    FeatureRow row;
    row.rank = static_cast<int>(parse_count(f[0], "rank"));
    row.website = std::string(text::trim(f[1]));
    for (std::size_t k = 0; k < kSeoParamCount; ++k) row.values[k] = parse_real(f[2 + k]);
    table.push_back(std::move(row));
  }
  return table;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<ParameterImportance> parameter_importance(const FeatureTable& table) {
  if (table.size() < 3) throw Error(ErrorCode::TooFewRows, "parameter importance needs at least 3 rows");
  std::vector<double> inverted(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) inverted[r] = -static_cast<double>(table[r].rank);

  std::vector<ParameterImportance> out(kSeoParamCount);
  double total = 0.0;
  for (std::size_t i = 0; i < kSeoParamCount; ++i) {
    std::vector<double> column(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) column[r] = table[r].values[i];
    out[i].param = static_cast<SeoParam>(i);
    out[i].spearman = spearman(column, inverted);
    total += std::abs(out[i].spearman);
  }
  if (total > 0.0) {
    for (auto& p : out) p.percent = 100.0 * std::abs(p.spearman) / total;
  }
  return out;
}

}  // namespace metaseo
