#include "metaseo/providers.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaseo/error.hpp"
#include "metaseo/http.hpp"
#include "metaseo/text.hpp"
#include "metaseo/url.hpp"

namespace metaseo {
namespace {

using nlohmann::json;

json parse_body(std::string_view body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedResponse, "provider response is not JSON");
  if (!j.is_object()) throw Error(ErrorCode::MalformedResponse, "provider response is not a JSON object");
  return j;
}

std::string str_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

struct FieldNames {
  const char* title;
  const char* link;
  const char* snippet;
  const char* display;
};

std::vector<SearchResultRecord> records_from(const json& items, const FieldNames& f, ProviderKind kind) {
  std::vector<SearchResultRecord> out;
  int position = 0;
  for (const auto& item : items) {
    ++position;
    if (!item.is_object()) continue;
    SearchResultRecord r;
    r.link = std::string(text::trim(str_field(item, f.link)));
    if (!is_absolute_http_url(r.link)) continue;
    r.title = text::strip_tags(str_field(item, f.title));
    r.snippet = text::strip_tags(str_field(item, f.snippet));
    r.display_link = str_field(item, f.display);
    r.provider = kind;
    r.provider_rank = position;
    out.push_back(std::move(r));
  }
  return out;
}

const json* find_path(const json& root, std::initializer_list<const char*> path) {
  const json* cur = &root;
  for (const char* key : path) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

std::vector<SearchResultRecord> google_from(const json& j) {
  const json* items = find_path(j, {"items"});
  if (!items || items->is_null()) return {};
  if (!items->is_array()) throw Error(ErrorCode::MalformedResponse, "items is not an array");
  return records_from(*items, {"title", "link", "htmlSnippet", "displayLink"}, ProviderKind::GoogleLike);
}

std::vector<SearchResultRecord> bing_from(const json& j) {
  const json* results = find_path(j, {"SearchResponse", "Web", "Results"});
  if (!results || results->is_null()) return {};
  if (!results->is_array()) throw Error(ErrorCode::MalformedResponse, "Web.Results is not an array");
  return records_from(*results, {"Title", "Url", "Description", "DisplayUrl"}, ProviderKind::BingLike);
}

std::string utc_day(std::chrono::system_clock::time_point tp) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string join_tokens(const Query& q, char sep) {
  std::string out;
  for (const auto& t : q.tokens) {
    if (!out.empty()) out += sep;
    out += t;
  }
  return out;
}

}  // namespace

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::GoogleLike: return "google_like";
    case ProviderKind::BingLike: return "bing_like";
    case ProviderKind::Fixture: return "fixture";
  }
  return "fixture";
}

std::optional<ProviderKind> provider_kind_from_string(std::string_view s) {
  if (s == "google_like") return ProviderKind::GoogleLike;
  if (s == "bing_like") return ProviderKind::BingLike;
  if (s == "fixture") return ProviderKind::Fixture;
  return std::nullopt;
}

std::vector<SearchResultRecord> parse_google_like(std::string_view body) {
  return google_from(parse_body(body));
}

std::vector<SearchResultRecord> parse_bing_like(std::string_view body) {
  return bing_from(parse_body(body));
}

std::vector<SearchResultRecord> parse_any_wire(std::string_view body) {
  auto j = parse_body(body);
  if (find_path(j, {"SearchResponse"})) return bing_from(j);
  return google_from(j);
}

// --- quota -----------------------------------------------------------------

QuotaStore::QuotaStore(std::optional<std::filesystem::path> state_file, Clock clock)
    : state_file_(std::move(state_file)), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::system_clock::now(); };
  load();
}

std::string QuotaStore::today() const { return utc_day(clock_()); }

void QuotaStore::load() {
  if (!state_file_ || !std::filesystem::exists(*state_file_)) return;
  std::ifstream in(*state_file_);
  auto j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    spdlog::warn("ignoring unreadable quota file {}", state_file_->string());
    return;
  }
  for (const auto& [name, value] : j.items()) {
    if (!value.is_object()) continue;
    Entry e;
    e.day = value.value("day", "");
    e.used = value.value("used", 0);
    entries_.emplace_back(name, e);
  }
}

void QuotaStore::save() const {
  if (!state_file_) return;
  json j = json::object();
  for (const auto& [name, e] : entries_) j[name] = {{"day", e.day}, {"used", e.used}};
  auto tmp = *state_file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, *state_file_, ec);
  if (ec) spdlog::warn("could not persist quota file: {}", ec.message());
}

QuotaStore::Entry& QuotaStore::entry_for(const std::string& provider) {
  auto day = today();
  for (auto& [name, e] : entries_) {
    if (name == provider) {
      if (e.day != day) e = Entry{day, 0};
      return e;
    }
  }
  entries_.emplace_back(provider, Entry{day, 0});
  return entries_.back().second;
}

void QuotaStore::consume(const std::string& provider, int limit_per_day) {
  std::lock_guard lock(mutex_);
  Entry& e = entry_for(provider);
  if (e.used >= limit_per_day) {
    throw Error(ErrorCode::QuotaExceeded,
                "daily quota of " + std::to_string(limit_per_day) + " exhausted for " + provider);
  }
  ++e.used;
  save();
}

int QuotaStore::used_today(const std::string& provider) {
  std::lock_guard lock(mutex_);
  return entry_for(provider).used;
}

// --- providers -------------------------------------------------------------

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {}

std::string HttpProvider::request_url(const Query& q) const {
  std::string url = config_.endpoint_or_dir;
  std::string key;
  if (!config_.api_key_env_var.empty()) {
    if (const char* v = std::getenv(config_.api_key_env_var.c_str())) key = v;
  }
  const std::string query = url_encode(join_tokens(q, ' '));
  const std::string count = std::to_string(kMaxResultsPerProvider);
  auto append = [&url](std::string_view param, const std::string& value) {
    url += url.find('?') == std::string::npos ? '?' : '&';
    url += param;
    url += '=';
    url += value;
  };
  if (url.find("{query}") != std::string::npos) replace_all(url, "{query}", query);
  else append("q", query);
  if (url.find("{count}") != std::string::npos) replace_all(url, "{count}", count);
  else append("num", count);
  if (url.find("{key}") != std::string::npos) replace_all(url, "{key}", url_encode(key));
  else if (!key.empty()) append("key", url_encode(key));
  return url;
}

std::string HttpProvider::fetch(const Query& q) const {
  auto res = http::get(request_url(q), config_.timeout_ms);
  if (!res.ok()) {
    throw Error(ErrorCode::ProviderUnavailable,
                config_.name + ": " + (res.error.empty() ? "HTTP " + std::to_string(res.status) : res.error));
  }
  return std::move(res.body);
}

std::vector<SearchResultRecord> HttpProvider::parse(std::string_view body) const {
  return config_.kind == ProviderKind::BingLike ? parse_bing_like(body) : parse_google_like(body);
}

FixtureProvider::FixtureProvider(ProviderConfig config) : config_(std::move(config)) {}

std::string FixtureProvider::file_stem(const Query& q) { return join_tokens(q, '-'); }

std::string FixtureProvider::fetch(const Query& q) const {
  std::filesystem::path dir(config_.endpoint_or_dir);
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::ProviderUnavailable, config_.name + ": fixture directory missing: " + dir.string());
  }
  auto file = dir / (file_stem(q) + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) return "{}";
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<SearchResultRecord> FixtureProvider::parse(std::string_view body) const {
  auto records = parse_any_wire(body);
  for (auto& r : records) r.provider = ProviderKind::Fixture;
  return records;
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
  if (config.kind == ProviderKind::Fixture) return std::make_unique<FixtureProvider>(config);
  return std::make_unique<HttpProvider>(config);
}

std::vector<SearchResultRecord> fetch_serp(const Provider& provider, const ExpandedQuery& q,
                                           QuotaStore& quota) {
  quota.consume(provider.name(), provider.daily_limit());
  auto records = provider.parse(provider.fetch(q.base));
  if (records.size() > kMaxResultsPerProvider) records.resize(kMaxResultsPerProvider);
  for (auto& r : records) r.provider_name = provider.name();
  return records;
}

FanOutResult fetch_all(const std::vector<std::unique_ptr<Provider>>& providers, const ExpandedQuery& q,
                       QuotaStore& quota) {
  std::vector<std::future<std::vector<SearchResultRecord>>> pending;
  pending.reserve(providers.size());
  for (const auto& p : providers) {
    pending.push_back(std::async(std::launch::async, [&p, &q, &quota] { return fetch_serp(*p, q, quota); }));
  }
  FanOutResult out;
  out.lists.resize(providers.size());
  for (std::size_t i = 0; i < providers.size(); ++i) {
    try {
      out.lists[i] = pending[i].get();
    } catch (const std::exception& e) {
      spdlog::warn("provider {} failed: {}", providers[i]->name(), e.what());
      out.failed.push_back(providers[i]->name());
    }
  }
  if (!providers.empty() && out.failed.size() == providers.size()) {
    throw Error(ErrorCode::AllProvidersFailed,
                "none of the search providers could be reached; please try again later");
  }
  if (providers.empty()) throw Error(ErrorCode::AllProvidersFailed, "no search providers are configured");
  return out;
}

}  // namespace metaseo
