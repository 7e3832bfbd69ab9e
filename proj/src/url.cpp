#include "metaseo/url.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <vector>

#include "metaseo/error.hpp"
#include "metaseo/text.hpp"

namespace metaseo {
namespace {

bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

// Removes "." and ".." segments per RFC 3986 5.2.4.
std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  bool absolute = !path.empty() && path.front() == '/';
  bool trailing = false;
  std::size_t i = absolute ? 1 : 0;
  while (i <= path.size()) {
    auto next = path.find('/', i);
    if (next == std::string_view::npos) next = path.size();
    auto seg = path.substr(i, next - i);
    trailing = false;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing = true;
    } else if (seg == ".") {
      trailing = true;
    } else {
      out.push_back(seg);
    }
    i = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) result += '/';
    result += out[k];
  }
  if (trailing && !result.empty() && result.back() != '/') result += '/';
  return result;
}

std::string authority_of(const UrlParts& p) {
  std::string a = p.host;
  if (p.port) a += ":" + std::to_string(*p.port);
  return a;
}

std::string assemble(const UrlParts& p) {
  std::string out = p.scheme + "://" + authority_of(p) + p.path;
  if (p.has_query) out += "?" + p.query;
  return out;
}

}  // namespace

std::optional<UrlParts> parse_http_url(std::string_view url) {
  url = text::trim(url);
  auto colon = url.find("://");
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  for (char c : url.substr(0, colon)) {
    if (!is_scheme_char(c)) return std::nullopt;
  }
  UrlParts p;
  p.scheme = text::to_lower_ascii(url.substr(0, colon));
  if (p.scheme != "http" && p.scheme != "https") return std::nullopt;

  std::string_view rest = url.substr(colon + 3);
  auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  std::string_view host = authority;
  if (auto pc = authority.rfind(':');
      pc != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    host = authority.substr(0, pc);
    auto port_text = authority.substr(pc + 1);
    if (!port_text.empty()) {
      int port = 0;
      auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
      if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535) {
        return std::nullopt;
      }
      p.port = port;
    }
  }
  if (host.empty()) return std::nullopt;
  for (char c : host) {
    if (std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
  }
  p.host = std::string(host);

  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    p.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    p.has_query = true;
    p.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  p.path = std::string(rest);
  return p;
}

bool is_absolute_http_url(std::string_view url) { return parse_http_url(url).has_value(); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

CanonicalUrl normalize_url(std::string_view url) {
  auto parts = parse_http_url(url);
  if (!parts) throw Error(ErrorCode::InvalidUrl, "not an absolute http(s) URL: " + std::string(url));

  parts->host = text::to_lower_ascii(parts->host);
  if (parts->host.rfind("www.", 0) == 0 && parts->host.size() > 4) parts->host.erase(0, 4);
  if ((parts->scheme == "http" && parts->port == 80) || (parts->scheme == "https" && parts->port == 443)) {
    parts->port.reset();
  }
  if (!parts->path.empty() && parts->path.back() == '/') parts->path.pop_back();

  CanonicalUrl out;
  out.canonical = assemble(*parts);
  out.hash = fnv1a64(out.canonical);
  return out;
}

std::optional<std::string> resolve_reference(std::string_view base, std::string_view ref) {
  ref = text::trim(ref);
  if (auto hash = ref.find('#'); hash != std::string_view::npos) ref = ref.substr(0, hash);
  if (ref.empty()) return std::nullopt;

  // Scheme-qualified reference.
  auto colon = ref.find(':');
  auto first_delim = ref.find_first_of("/?");
  if (colon != std::string_view::npos && colon > 0 &&
      (first_delim == std::string_view::npos || colon < first_delim)) {
    bool scheme_ok = true;
    for (char c : ref.substr(0, colon)) scheme_ok = scheme_ok && is_scheme_char(c);
    if (scheme_ok) {
      auto abs = parse_http_url(ref);
      if (!abs) return std::nullopt;
      abs->path = abs->path.empty() ? std::string() : remove_dot_segments(abs->path);
      return assemble(*abs);
    }
  }

  auto b = parse_http_url(base);
  if (!b) return std::nullopt;
  UrlParts r;
  r.scheme = b->scheme;

  if (ref.rfind("//", 0) == 0) {
    auto abs = parse_http_url(b->scheme + ":" + std::string(ref));
    if (!abs) return std::nullopt;
    return assemble(*abs);
  }

  r.host = b->host;
  r.port = b->port;
  std::string_view path = ref;
  if (auto q = ref.find('?'); q != std::string_view::npos) {
    r.has_query = true;
    r.query = std::string(ref.substr(q + 1));
    path = ref.substr(0, q);
  }
  if (path.empty()) {
    r.path = b->path;
    if (!r.has_query) {
      r.has_query = b->has_query;
      r.query = b->query;
    }
  } else if (path.front() == '/') {
    r.path = remove_dot_segments(path);
  } else {
    std::string merged;
    if (b->path.empty()) {
      merged = "/" + std::string(path);
    } else {
      merged = b->path.substr(0, b->path.rfind('/') + 1) + std::string(path);
    }
    r.path = remove_dot_segments(merged);
  }
  return assemble(r);
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() * 3);
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

}  // namespace metaseo
