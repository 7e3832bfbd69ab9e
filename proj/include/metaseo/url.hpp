#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace metaseo {

struct UrlParts {
  std::string scheme;  // lowercase
  std::string host;    // as written
  std::optional<int> port;
  std::string path;    // may be empty
  std::string query;   // without '?', empty if absent
  bool has_query = false;
  std::string fragment;
};

// Absolute http/https only; nullopt for anything else.
std::optional<UrlParts> parse_http_url(std::string_view url);

bool is_absolute_http_url(std::string_view url);

struct CanonicalUrl {
  std::string canonical;
  std::uint64_t hash = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t hash);  // 16 lowercase hex digits

// Lowercase scheme and host, drop default port, fragment, one trailing
// slash and one leading "www." label. Throws Error(InvalidUrl).
CanonicalUrl normalize_url(std::string_view url);

// Resolves an href found in a page against the page's URL. Returns nullopt
// for references that do not name a fetchable http(s) resource
// (javascript:, mailto:, fragment-only, empty, ...). The fragment is dropped.
std::optional<std::string> resolve_reference(std::string_view base, std::string_view ref);

std::string url_encode(std::string_view s);

}  // namespace metaseo
