#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaseo/query.hpp"

namespace metaseo {

enum class ProviderKind { GoogleLike, BingLike, Fixture };

std::string_view to_string(ProviderKind kind);
std::optional<ProviderKind> provider_kind_from_string(std::string_view s);

struct SearchResultRecord {
  std::string title;
  std::string link;
  std::string snippet;
  std::string display_link;
  ProviderKind provider = ProviderKind::Fixture;
  std::string provider_name;
  int provider_rank = 0;  // 1-based

  bool operator==(const SearchResultRecord&) const = default;
};

// Results beyond this many per provider and search are dropped.
inline constexpr std::size_t kMaxResultsPerProvider = 40;

// items[] with title/link/htmlSnippet/displayLink. Throws MalformedResponse.
std::vector<SearchResultRecord> parse_google_like(std::string_view body);

// SearchResponse.Web.Results[] with Title/Url/Description/DisplayUrl.
std::vector<SearchResultRecord> parse_bing_like(std::string_view body);

// Picks the parser from the document shape (fixtures carry either shape).
std::vector<SearchResultRecord> parse_any_wire(std::string_view body);

// ---------------------------------------------------------------------------

using Clock = std::function<std::chrono::system_clock::time_point()>;

// Per-provider daily request budget, optionally persisted to a JSON file
// so the limit survives restarts. Days roll over at UTC midnight.
class QuotaStore {
 public:
  explicit QuotaStore(std::optional<std::filesystem::path> state_file = std::nullopt,
                      Clock clock = nullptr);

  // Atomically checks the budget and records one use.
  // Throws Error(QuotaExceeded) when used_today == limit.
  void consume(const std::string& provider, int limit_per_day);

  int used_today(const std::string& provider);

 private:
  struct Entry {
    std::string day;
    int used = 0;
  };

  std::string today() const;
  void load();
  void save() const;
  Entry& entry_for(const std::string& provider);

  std::optional<std::filesystem::path> state_file_;
  Clock clock_;
  std::mutex mutex_;
  std::vector<std::pair<std::string, Entry>> entries_;
};

// ---------------------------------------------------------------------------

struct ProviderConfig {
  std::string name;
  ProviderKind kind = ProviderKind::Fixture;
  std::string endpoint_or_dir;
  std::string api_key_env_var;
  int daily_limit = 100;
  int timeout_ms = 5000;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual const std::string& name() const = 0;
  virtual ProviderKind kind() const = 0;
  virtual int daily_limit() const = 0;
  // Raw transport. Throws Error(ProviderUnavailable).
  virtual std::string fetch(const Query& q) const = 0;
  virtual std::vector<SearchResultRecord> parse(std::string_view body) const = 0;
};

// Google-like or Bing-like JSON API over HTTP. The endpoint may contain
// {query}, {key} and {count}; missing placeholders are appended as q, key
// and num parameters.
class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);

  const std::string& name() const override { return config_.name; }
  ProviderKind kind() const override { return config_.kind; }
  int daily_limit() const override { return config_.daily_limit; }
  std::string fetch(const Query& q) const override;
  std::vector<SearchResultRecord> parse(std::string_view body) const override;

  std::string request_url(const Query& q) const;

 private:
  ProviderConfig config_;
};

// Reads <dir>/<token-token-...>.json. Missing directory means the provider
// is unavailable; a missing file for the query is an empty result page.
class FixtureProvider final : public Provider {
 public:
  explicit FixtureProvider(ProviderConfig config);

  const std::string& name() const override { return config_.name; }
  ProviderKind kind() const override { return ProviderKind::Fixture; }
  int daily_limit() const override { return config_.daily_limit; }
  std::string fetch(const Query& q) const override;
  std::vector<SearchResultRecord> parse(std::string_view body) const override;

  static std::string file_stem(const Query& q);

 private:
  ProviderConfig config_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

// One request for the base query (synonyms are not sent upstream). Consumes
// one unit of quota before the request, caps the result at 40 records and
// stamps provider name and kind on each record.
std::vector<SearchResultRecord> fetch_serp(const Provider& provider, const ExpandedQuery& q,
                                           QuotaStore& quota);

struct FanOutResult {
  // One list per provider, in provider order; empty for failed providers.
  std::vector<std::vector<SearchResultRecord>> lists;
  std::vector<std::string> failed;
};

// Queries every provider concurrently. Throws Error(AllProvidersFailed)
// only when no provider produced a response.
FanOutResult fetch_all(const std::vector<std::unique_ptr<Provider>>& providers,
                       const ExpandedQuery& q, QuotaStore& quota);

}  // namespace metaseo
