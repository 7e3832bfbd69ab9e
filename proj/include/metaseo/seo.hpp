#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaseo/providers.hpp"
#include "metaseo/query.hpp"

namespace metaseo {

// The nine ranking parameters, in table column order.
enum class SeoParam : std::size_t {
  TitleMatch = 0,
  MetaDescription,
  MetaKeyword,
  Snippet,
  MetaExpires,
  MetaContent,
  ImageAlt,
  Sitemap,
  LinksPresent,
};

inline constexpr std::size_t kSeoParamCount = 9;

std::string_view param_name(SeoParam p);
bool is_binary(SeoParam p);

struct SeoFeatureVector {
  std::uint64_t title_match = 0;
  std::uint64_t meta_description_hits = 0;
  std::uint64_t meta_keyword_hits = 0;
  std::uint64_t snippet_hits = 0;
  std::uint64_t meta_expires_fresh = 0;
  std::uint64_t meta_content_tags = 0;
  std::uint64_t img_alt_count = 0;
  std::uint64_t sitemap_present = 0;
  std::uint64_t links_present = 0;

  std::array<double, kSeoParamCount> values() const;
  std::uint64_t& at(SeoParam p);
  std::uint64_t at(SeoParam p) const;

  bool operator==(const SeoFeatureVector&) const = default;
};

struct FeatureOptions {
  // "Now" for judging meta expires; pinned in offline runs.
  std::chrono::system_clock::time_point reference_time = std::chrono::system_clock::now();
};

// Throws Error(UndecodableContent) when the bytes cannot be decoded.
SeoFeatureVector extract_features(std::string_view html, const SearchResultRecord& srr,
                                  const ExpandedQuery& q, const FeatureOptions& options = {});

// Occurrences of every match term (as a token run) inside `field`.
std::uint64_t count_term_hits(std::string_view field, const ExpandedQuery& q);

// Parses HTTP-date / ISO-8601 style dates as UTC.
std::optional<std::chrono::system_clock::time_point> parse_http_date(std::string_view s);

// --- audit -----------------------------------------------------------------

inline constexpr std::size_t kMaxTitleLength = 64;

struct MetaTagStatus {
  std::string tag;  // catalog name, e.g. "revisit"
  bool present = false;
  std::string value;
};

struct LinkFrequency {
  std::string url;
  std::size_t count = 0;
};

struct AuditReport {
  std::string url;
  std::string title_text;
  std::size_t title_length = 0;  // code points
  bool title_too_long = false;
  std::vector<MetaTagStatus> tags;  // fixed catalog order
  std::size_t images_total = 0;
  std::size_t images_with_alt = 0;
  bool breadcrumb = false;
  std::vector<std::string> sitemap_refs;
  std::size_t links_total = 0;
  std::vector<LinkFrequency> links;  // most frequent first
  std::vector<std::string> warnings;
  std::vector<std::string> advisories;

  const MetaTagStatus& tag(std::string_view name) const;
};

// keywords, description, content, expires, revisit, robots, distribution,
// author, copyright, language
const std::vector<std::string>& audit_catalog();

// Throws Error(UndecodableContent).
AuditReport audit_page(std::string_view html, std::string_view url);

// Text content of a page (title and body, scripts and styles excluded).
// Throws Error(UndecodableContent).
std::string page_text(std::string_view html);

// Absolute URLs of every hyperlink on the page, in document order
// (duplicates kept).
std::vector<std::string> page_links(std::string_view html, std::string_view base_url);

// --- page retrieval -------------------------------------------------------

class PageSource {
 public:
  virtual ~PageSource() = default;
  // nullopt when the page cannot be retrieved.
  virtual std::optional<std::string> fetch(const std::string& url) const = 0;
};

class HttpPageSource final : public PageSource {
 public:
  explicit HttpPageSource(int timeout_ms = 5000) : timeout_ms_(timeout_ms) {}
  std::optional<std::string> fetch(const std::string& url) const override;

 private:
  int timeout_ms_;
};

// <dir>/<fnv1a64-hex of canonical URL>.html
class FixturePageSource final : public PageSource {
 public:
  explicit FixturePageSource(std::string dir) : dir_(std::move(dir)) {}
  std::optional<std::string> fetch(const std::string& url) const override;

  static std::string file_name(std::string_view url);

 private:
  std::string dir_;
};

inline constexpr std::size_t kDefaultFetchConcurrency = 8;

// Retrieves every record's page with at most `concurrency` fetches in
// flight. Failed fetches are simply absent from the result.
std::map<std::string, std::string> fetch_pages(const std::vector<SearchResultRecord>& records,
                                               const PageSource& source,
                                               std::size_t concurrency = kDefaultFetchConcurrency);

}  // namespace metaseo
