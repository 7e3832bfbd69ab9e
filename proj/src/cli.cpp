#include "metaseo/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metaseo/engine.hpp"
#include "metaseo/error.hpp"
#include "metaseo/eval.hpp"
#include "metaseo/http.hpp"
#include "metaseo/merge.hpp"
#include "metaseo/server.hpp"
#include "metaseo/text.hpp"
#include "metaseo/url.hpp"

namespace metaseo {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Config config_from(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("IRAL_CONFIG")) path = env;
  }
  if (path.empty()) throw Error(ErrorCode::InvalidConfig, "no config given (use --config or IRAL_CONFIG)");
  return load_config(path);
}

double rounded(double v) { return std::stod(format_number(v)); }

ordered_json features_json(const SeoFeatureVector& f) {
  ordered_json j;
  for (std::size_t i = 0; i < kSeoParamCount; ++i) {
    auto p = static_cast<SeoParam>(i);
    j[std::string(param_name(p))] = f.at(p);
  }
  return j;
}

ordered_json audit_json(const AuditReport& r) {
  ordered_json j;
  j["url"] = r.url;
  j["title"] = {{"text", r.title_text}, {"length", r.title_length}, {"too_long", r.title_too_long}};
  j["tags"] = ordered_json::object();
  for (const auto& t : r.tags) {
    j["tags"][t.tag] = {{"present", t.present}, {"value", t.present ? ordered_json(t.value) : ordered_json(nullptr)}};
  }
  j["images"] = {{"total", r.images_total}, {"with_alt", r.images_with_alt}};
  j["breadcrumb"] = r.breadcrumb;
  j["sitemap_refs"] = r.sitemap_refs;
  j["links"] = {{"total", r.links_total}, {"unique", r.links.size()}, {"urls", ordered_json::array()}};
  for (const auto& l : r.links) j["links"]["urls"].push_back({{"url", l.url}, {"count", l.count}});
  j["warnings"] = r.warnings;
  j["advisories"] = r.advisories;
  return j;
}

void print_response_text(const SearchResponse& r, std::ostream& out) {
  out << "Results for \"" << r.query << "\" (page " << r.page << ", " << r.total << " total)\n";
  if (!r.degraded.empty()) {
    out << "Unavailable providers:";
    for (const auto& d : r.degraded) out << ' ' << d;
    out << '\n';
  }
  for (const auto& item : r.results) {
    out << '\n' << item.rank << ". " << item.title << '\n';
    out << "   " << item.link << '\n';
    if (!item.snippet.empty()) out << "   " << item.snippet << '\n';
    out << "   score " << format_number(item.score) << '\n';
  }
}

int cmd_search(const std::string& query, int page, bool as_json, const std::string& config, std::ostream& out) {
  if (text::trim(query).empty()) throw UsageError("query is blank");
  SearchEngine engine(config_from(config));
  auto response = engine.search(query, page);
  if (as_json) out << to_json(response);
  else print_response_text(response, out);
  return kExitOk;
}

int cmd_audit(const std::string& target, const std::string& query, std::ostream& out) {
  std::string html;
  std::string url = target;
  if (std::filesystem::is_regular_file(target)) {
    html = read_file(target);
  } else if (is_absolute_http_url(target)) {
    auto res = http::get(target, 10000);
    if (!res.ok()) {
      throw Error(ErrorCode::ProviderUnavailable,
                  "fetch failed: " + (res.error.empty() ? "HTTP " + std::to_string(res.status) : res.error));
    }
    html = std::move(res.body);
  } else {
    throw UsageError("'" + target + "' is neither a readable file nor an http(s) URL");
  }
  auto j = audit_json(audit_page(html, url));
  if (!query.empty()) {
    auto q = expand_query(classify_query(query), NoSynonyms{});
    SearchResultRecord srr;
    srr.link = url;
    j["features"] = features_json(extract_features(html, srr, q));
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_rank(const std::vector<std::string>& serps, const std::string& pages_dir, const std::string& query,
             const std::string& reference_time, const std::string& config_path, bool as_json, std::ostream& out) {
  if (text::trim(query).empty()) throw UsageError("--query is required and must not be blank");
  Config config;
  if (!config_path.empty()) config = load_config(config_path);

  std::vector<std::vector<SearchResultRecord>> lists;
  for (const auto& file : serps) {
    auto records = parse_any_wire(read_file(file));
    if (records.size() > kMaxResultsPerProvider) records.resize(kMaxResultsPerProvider);
    for (auto& r : records) r.provider_name = file;
    lists.push_back(std::move(records));
  }
  auto merged = merge_dedupe(lists);
  auto expanded = expand_query(classify_query(query), NoSynonyms{});
  FeatureOptions options;
  if (!reference_time.empty()) {
    auto tp = parse_http_date(reference_time);
    if (!tp) throw UsageError("--reference-time is not a date");
    options.reference_time = *tp;
  } else if (config.reference_time) {
    options.reference_time = *config.reference_time;
  }
  FixturePageSource source(pages_dir);
  auto outcome = rank_merged(expanded, merged, source, config.weights, options, config.fetch_concurrency);

  if (!as_json) {
    out << feature_table_csv(serp_feature_table(outcome.ranked));
    return kExitOk;
  }
  auto links = link_scores(outcome.ranked, outcome.pages, expanded, config.pagerank);
  ordered_json j = ordered_json::array();
  for (std::size_t i = 0; i < outcome.ranked.size(); ++i) {
    const auto& r = outcome.ranked[i];
    ordered_json item;
    item["rank"] = r.final_rank;
    item["link"] = r.srr.link;
    item["canonical"] = r.canonical_url;
    item["provider"] = r.srr.provider_name;
    item["provider_rank"] = r.srr.provider_rank;
    item["score"] = rounded(r.score);
    item["features_missing"] = r.features_missing;
    item["features"] = features_json(r.features);
    item["pagerank"] = rounded(links[i].pagerank);
    item["content_weight"] = rounded(links[i].relevance.content_weight);
    item["probability_weight"] = rounded(links[i].relevance.probability_weight);
    item["combined_rank"] = rounded(links[i].combined);
    j.push_back(std::move(item));
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& judgments, bool as_json, std::ostream& out) {
  auto report = evaluate(parse_judgments_csv(read_file(judgments)));
  out << (as_json ? report_json(report) : report_text(report));
  return kExitOk;
}

int cmd_importance(const std::string& table_path, bool as_json, std::ostream& out) {
  auto importance = parameter_importance(parse_feature_table_csv(read_file(table_path)));
  if (as_json) {
    ordered_json j = ordered_json::array();
    for (const auto& p : importance) {
      j.push_back({{"parameter", param_name(p.param)}, {"spearman", rounded(p.spearman)}, {"percent", rounded(p.percent)}});
    }
    out << j.dump(2) << '\n';
  } else {
    for (const auto& p : importance) {
      out << param_name(p.param) << ',' << format_number(p.percent) << '\n';
    }
  }
  return kExitOk;
}

SearchServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& config, std::ostream& out) {
  SearchEngine engine(config_from(config));
  SearchServer server(engine);
  int bound = server.bind(host, port);
  if (bound <= 0) throw Error(ErrorCode::InvalidInput, "cannot bind " + host + ":" + std::to_string(port));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  out << "listening on port " << bound << std::endl;
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meta-search engine with SEO-based re-ranking", "metaseo"};
  app.require_subcommand(1);

  std::string config;
  bool as_json = false;

  auto* search = app.add_subcommand("search", "Query all providers and print ranked results");
  std::string query;
  int page = 1;
  search->add_option("query", query, "Search text")->required();
  search->add_option("--page", page, "Result page (1-5)")->check(CLI::Range(1, 5));
  search->add_flag("--json", as_json, "Print the JSON response body");
  search->add_option("--config", config, "Config file (default: $IRAL_CONFIG)");

  auto* audit = app.add_subcommand("audit", "Report on-page SEO tags of a URL or local HTML file");
  std::string target;
  std::string audit_query;
  audit->add_option("target", target, "URL or file")->required();
  audit->add_option("--query", audit_query, "Also extract ranking features for this query");

  auto* rank = app.add_subcommand("rank", "Merge SERP files and rank them against fixture pages");
  std::vector<std::string> serps;
  std::string pages_dir;
  std::string rank_query;
  std::string reference_time;
  rank->add_option("--serps", serps, "Provider JSON files in priority order")->required()->check(CLI::ExistingFile);
  rank->add_option("--pages", pages_dir, "Fixture page directory")->required()->check(CLI::ExistingDirectory);
  rank->add_option("--query", rank_query, "Query the SERPs answer")->required();
  rank->add_option("--reference-time", reference_time, "Date used to judge meta expires");
  rank->add_option("--config", config, "Config file for weights and PageRank settings");
  rank->add_flag("--json", as_json, "Print ranked results with link scores as JSON");

  auto* eval = app.add_subcommand("eval", "Precision, mean precision and relative recall");
  std::string judgments;
  eval->add_option("--judgments", judgments, "Judgments CSV")->required()->check(CLI::ExistingFile);
  eval->add_flag("--json", as_json, "JSON output");

  auto* importance = app.add_subcommand("importance", "Per-parameter contribution to a SERP ordering");
  std::string table;
  importance->add_option("--table", table, "Feature table CSV")->required()->check(CLI::ExistingFile);
  importance->add_flag("--json", as_json, "JSON output");

  auto* serve = app.add_subcommand("serve", "Run the HTTP search service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "Port (0 = ephemeral)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--config", config, "Config file (default: $IRAL_CONFIG)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*search) return cmd_search(query, page, as_json, config, out);
    if (*audit) return cmd_audit(target, audit_query, out);
    if (*rank) return cmd_rank(serps, pages_dir, rank_query, reference_time, config, as_json, out);
    if (*eval) return cmd_eval(judgments, as_json, out);
    if (*importance) return cmd_importance(table, as_json, out);
    if (*serve) return cmd_serve(host, port, config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace metaseo
