#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaseo/providers.hpp"
#include "metaseo/query.hpp"
#include "metaseo/rank.hpp"
#include "metaseo/seo.hpp"

namespace metaseo {

struct SynonymConfig {
  std::string file;
  std::string endpoint;  // with {term}
  std::string pointer = "/synonyms";
};

struct Config {
  std::vector<ProviderConfig> providers;
  SynonymConfig synonyms;
  std::string pages_dir;  // fixture pages; empty means fetch over HTTP
  int page_timeout_ms = 5000;
  std::size_t fetch_concurrency = kDefaultFetchConcurrency;
  WeightVector weights;
  PageRankOptions pagerank;
  bool offline = false;
  std::string quota_file;
  std::optional<std::chrono::system_clock::time_point> reference_time;
  std::string static_dir;
};

// Relative paths inside the file are resolved against its directory.
// Throws Error(InvalidConfig).
Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

struct ResultItem {
  std::string title;
  std::string link;
  std::string snippet;
  std::string display_link;
  double score = 0.0;
  int rank = 0;
};

struct SearchResponse {
  std::string query;
  int page = 1;
  std::size_t page_size = 10;
  std::size_t total = 0;
  std::vector<ResultItem> results;
  std::vector<std::string> degraded;
};

std::string to_json(const SearchResponse& response);

struct RankOutcome {
  std::vector<RankedResult> ranked;
  std::map<std::string, std::string> pages;  // link -> page bytes that were fetched
};

// Merged records -> pages -> features -> ranked order. Pages that are
// missing or undecodable rank with an all-zero vector and are flagged.
RankOutcome rank_merged(const ExpandedQuery& q, const std::vector<SearchResultRecord>& merged,
                        const PageSource& pages, const WeightVector& weights,
                        const FeatureOptions& features, std::size_t concurrency);

class SearchEngine {
 public:
  explicit SearchEngine(Config config, Clock clock = nullptr);

  // Throws Error(EmptyQuery), Error(PageOutOfRange), Error(AllProvidersFailed).
  SearchResponse search(std::string_view query, int page = 1);

  const Config& config() const { return config_; }

 private:
  Config config_;
  Clock clock_;
  std::vector<std::unique_ptr<Provider>> providers_;
  std::unique_ptr<SynonymSource> synonyms_;
  std::unique_ptr<PageSource> pages_;
  QuotaStore quota_;
};

}  // namespace metaseo
