#include "metaseo/engine.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaseo/error.hpp"
#include "metaseo/merge.hpp"
#include "metaseo/text.hpp"

namespace metaseo {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string resolve_path(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path.string();
  return (base / path).lexically_normal().string();
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad(std::string("config key '") + key + "' has the wrong type");
  }
}

// Nine significant digits keeps the JSON body stable across platforms.
double score_for_output(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", s);
  return std::strtod(buf, nullptr);
}

}  // namespace

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) bad("config must be a JSON object");

  Config c;
  c.offline = get_or(j, "offline", false);
  if (auto it = j.find("providers"); it != j.end()) {
    if (!it->is_array()) bad("providers must be an array");
    for (const auto& p : *it) {
      if (!p.is_object()) bad("provider entries must be objects");
      ProviderConfig pc;
      pc.name = get_or<std::string>(p, "name", "");
      if (pc.name.empty()) bad("provider without a name");
      auto kind = provider_kind_from_string(get_or<std::string>(p, "kind", ""));
      if (!kind) bad("provider " + pc.name + " has an unknown kind");
      pc.kind = *kind;
      pc.endpoint_or_dir = get_or<std::string>(p, "endpoint_or_dir", "");
      if (pc.kind == ProviderKind::Fixture) pc.endpoint_or_dir = resolve_path(base_dir, pc.endpoint_or_dir);
      pc.api_key_env_var = get_or<std::string>(p, "api_key_env_var", "");
      pc.daily_limit = get_or(p, "daily_limit", 100);
      pc.timeout_ms = get_or(p, "timeout_ms", 5000);
      if (pc.daily_limit < 0) bad("daily_limit must be >= 0");
      if (c.offline && pc.kind != ProviderKind::Fixture) bad("offline config cannot use provider " + pc.name);
      c.providers.push_back(std::move(pc));
    }
  }
  if (auto it = j.find("synonyms"); it != j.end() && it->is_object()) {
    c.synonyms.file = resolve_path(base_dir, get_or<std::string>(*it, "file", ""));
    c.synonyms.endpoint = get_or<std::string>(*it, "endpoint", "");
    c.synonyms.pointer = get_or<std::string>(*it, "pointer", "/synonyms");
    if (c.offline && !c.synonyms.endpoint.empty()) bad("offline config cannot use a synonym endpoint");
  }
  if (auto it = j.find("pages"); it != j.end() && it->is_object()) {
    c.pages_dir = resolve_path(base_dir, get_or<std::string>(*it, "dir", ""));
    c.page_timeout_ms = get_or(*it, "timeout_ms", 5000);
  }
  if (c.offline && c.pages_dir.empty()) bad("offline config needs pages.dir");
  c.fetch_concurrency = get_or<std::size_t>(j, "fetch_concurrency", kDefaultFetchConcurrency);
  if (c.fetch_concurrency == 0) bad("fetch_concurrency must be positive");

  if (auto it = j.find("weights"); it != j.end()) {
    if (!it->is_array() || it->size() != kSeoParamCount) bad("weights must be an array of 9 numbers");
    std::array<double, kSeoParamCount> w{};
    for (std::size_t i = 0; i < kSeoParamCount; ++i) {
      if (!(*it)[i].is_number()) bad("weights must be numbers");
      w[i] = (*it)[i].get<double>();
    }
    try {
      c.weights = WeightVector(w);
    } catch (const Error& e) {
      bad(e.what());
    }
    if (!(c.weights.sum() > 0.0)) bad("at least one weight must be positive");
  }
  c.pagerank.damping = get_or(j, "damping", kDefaultDamping);
  c.pagerank.tolerance = get_or(j, "tolerance", 1e-9);
  c.pagerank.max_iter = get_or(j, "max_iter", 200);
  if (!(c.pagerank.damping > 0.0 && c.pagerank.damping < 1.0)) bad("damping must lie in (0,1)");
  if (!(c.pagerank.tolerance > 0.0)) bad("tolerance must be positive");
  auto variant = pagerank_variant_from_string(get_or<std::string>(j, "formula_variant", "appendix3"));
  if (!variant) bad("formula_variant must be appendix3 or section336");
  c.pagerank.variant = *variant;

  c.quota_file = resolve_path(base_dir, get_or<std::string>(j, "quota_file", ""));
  if (auto ref = get_or<std::string>(j, "reference_time", ""); !ref.empty()) {
    auto tp = parse_http_date(ref);
    if (!tp) bad("reference_time is not a date");
    c.reference_time = tp;
  }
  c.static_dir = resolve_path(base_dir, get_or<std::string>(j, "static_dir", ""));
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string to_json(const SearchResponse& response) {
  ordered_json j;
  j["query"] = response.query;
  j["page"] = response.page;
  j["page_size"] = response.page_size;
  j["total"] = response.total;
  j["results"] = ordered_json::array();
  for (const auto& r : response.results) {
    ordered_json item;
    item["title"] = r.title;
    item["link"] = r.link;
    item["snippet"] = r.snippet;
    item["display_link"] = r.display_link;
    item["score"] = r.score;
    item["rank"] = r.rank;
    j["results"].push_back(std::move(item));
  }
  j["degraded"] = response.degraded;
  return j.dump(2) + "\n";
}

RankOutcome rank_merged(const ExpandedQuery& q, const std::vector<SearchResultRecord>& merged,
                        const PageSource& pages, const WeightVector& weights,
                        const FeatureOptions& features, std::size_t concurrency) {
  RankOutcome out;
  out.pages = fetch_pages(merged, pages, concurrency);
  std::map<std::string, SeoFeatureVector> vectors;
  for (const auto& r : merged) {
    auto it = out.pages.find(r.link);
    if (it == out.pages.end()) continue;
    try {
      vectors.emplace(r.link, extract_features(it->second, r, q, features));
    } catch (const Error& e) {
      spdlog::warn("features unavailable for {}: {}", r.link, e.what());
    }
  }
  out.ranked = rank_results(merged, vectors, weights);
  return out;
}

SearchEngine::SearchEngine(Config config, Clock clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::system_clock::now(); })),
      quota_(config_.quota_file.empty() ? std::nullopt
                                        : std::optional<std::filesystem::path>(config_.quota_file),
             clock_) {
  for (const auto& p : config_.providers) providers_.push_back(make_provider(p));
  if (!config_.synonyms.file.empty()) {
    synonyms_ = std::make_unique<JsonFileSynonyms>(JsonFileSynonyms::load(config_.synonyms.file));
  } else if (!config_.synonyms.endpoint.empty()) {
    synonyms_ = std::make_unique<HttpSynonyms>(config_.synonyms.endpoint, config_.synonyms.pointer);
  } else {
    synonyms_ = std::make_unique<NoSynonyms>();
  }
  if (!config_.pages_dir.empty()) {
    pages_ = std::make_unique<FixturePageSource>(config_.pages_dir);
  } else {
    pages_ = std::make_unique<HttpPageSource>(config_.page_timeout_ms);
  }
}

SearchResponse SearchEngine::search(std::string_view query, int page) {
  auto q = classify_query(query);
  if (page < 1 || page > static_cast<int>(kMaxPages)) {
    throw Error(ErrorCode::PageOutOfRange, "page must be between 1 and " + std::to_string(kMaxPages));
  }
  auto expanded = expand_query(q, *synonyms_);
  auto fan = fetch_all(providers_, expanded, quota_);
  auto merged = merge_dedupe(fan.lists);

  FeatureOptions options;
  options.reference_time = config_.reference_time.value_or(clock_());
  auto outcome = rank_merged(expanded, merged, *pages_, config_.weights, options, config_.fetch_concurrency);

  SearchResponse response;
  response.query = std::string(text::trim(query));
  response.page = page;
  response.page_size = kPageSize;
  response.total = outcome.ranked.size();
  response.degraded = fan.failed;
  auto begin = static_cast<std::size_t>(page - 1) * kPageSize;
  for (auto i = begin; i < std::min(begin + kPageSize, outcome.ranked.size()); ++i) {
    const auto& r = outcome.ranked[i];
    response.results.push_back({r.srr.title, r.srr.link, r.srr.snippet, r.srr.display_link,
                                score_for_output(r.score), r.final_rank});
  }
  return response;
}

}  // namespace metaseo
