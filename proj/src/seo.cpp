#include "metaseo/seo.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <locale>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "metaseo/error.hpp"
#include "metaseo/html.hpp"
#include "metaseo/http.hpp"
#include "metaseo/text.hpp"
#include "metaseo/url.hpp"

namespace metaseo {
namespace {

struct MetaElement {
  std::string key;  // lowercase name, http-equiv or property
  std::optional<std::string> content;
  std::optional<std::string> charset;
};

struct Anchor {
  std::string href;
  std::string label;
};

struct PageScan {
  std::optional<std::string> title;
  std::vector<MetaElement> metas;
  std::size_t images_total = 0;
  std::size_t images_with_alt = 0;
  std::vector<std::string> hrefs;  // a[href] and link[href], document order
  std::vector<Anchor> anchors;
  std::vector<std::string> sitemap_link_rels;  // link rel=sitemap targets
  bool breadcrumb = false;
  std::string text;
};

bool contains_ci(std::string_view hay, std::string_view needle) {
  return text::to_lower_ascii(hay).find(needle) != std::string::npos;
}

PageScan scan(std::string_view decoded) {
  PageScan page;
  auto tokens = html::tokenize(decoded);
  bool in_title = false;
  std::optional<std::size_t> open_anchor;
  std::string title_text;

  for (const auto& t : tokens) {
    using Kind = html::Token::Kind;
    if (t.kind == Kind::Text) {
      if (in_title) title_text += t.text;
      if (open_anchor) page.anchors[*open_anchor].label += t.text;
      page.text += t.text;
      page.text += ' ';
      continue;
    }
    if (t.kind == Kind::EndTag) {
      if (t.name == "title" && in_title) {
        in_title = false;
        if (!page.title) page.title = text::collapse_whitespace(title_text);
      }
      if (t.name == "a") open_anchor.reset();
      continue;
    }
    if (t.kind != Kind::StartTag) continue;

    for (const char* key : {"class", "id", "aria-label", "itemtype"}) {
      if (auto v = t.attr(key); v && contains_ci(*v, "breadcrumb")) page.breadcrumb = true;
    }

    if (t.name == "title") {
      if (!page.title) {
        in_title = true;
        title_text.clear();
      }
    } else if (t.name == "meta") {
      MetaElement m;
      if (auto v = t.attr("name")) m.key = text::to_lower_ascii(text::trim(*v));
      else if (auto he = t.attr("http-equiv")) m.key = text::to_lower_ascii(text::trim(*he));
      else if (auto pr = t.attr("property")) m.key = text::to_lower_ascii(text::trim(*pr));
      if (auto v = t.attr("content")) m.content = std::string(*v);
      if (auto v = t.attr("charset")) m.charset = std::string(*v);
      page.metas.push_back(std::move(m));
    } else if (t.name == "img") {
      ++page.images_total;
      if (auto alt = t.attr("alt"); alt && !text::trim(*alt).empty()) ++page.images_with_alt;
    } else if (t.name == "a") {
      open_anchor.reset();
      if (auto href = t.attr("href")) {
        page.hrefs.emplace_back(*href);
        page.anchors.push_back({std::string(*href), {}});
        open_anchor = page.anchors.size() - 1;
      }
    } else if (t.name == "link") {
      if (auto href = t.attr("href")) {
        page.hrefs.emplace_back(*href);
        if (auto rel = t.attr("rel"); rel && contains_ci(*rel, "sitemap")) {
          page.sitemap_link_rels.emplace_back(*href);
        }
      }
    }
  }
  // Unclosed <title> at end of input.
  if (in_title && !page.title) page.title = text::collapse_whitespace(title_text);
  return page;
}

std::string decoded_or_throw(std::string_view bytes) {
  auto decoded = html::decode(bytes);
  if (!decoded) throw Error(ErrorCode::UndecodableContent, "page bytes are not decodable text");
  return std::move(*decoded);
}

const MetaElement* find_meta(const PageScan& page, std::initializer_list<std::string_view> keys) {
  for (const auto& m : page.metas) {
    for (auto k : keys) {
      if (m.key == k) return &m;
    }
  }
  return nullptr;
}

// Last path segment (before query/fragment) of a reference, lowercase.
std::string last_segment(std::string_view ref) {
  auto cut = ref.find_first_of("?#");
  ref = ref.substr(0, cut);
  auto slash = ref.rfind('/');
  if (slash != std::string_view::npos) ref.remove_prefix(slash + 1);
  return text::to_lower_ascii(ref);
}

bool is_sitemap_file(std::string_view ref) {
  auto seg = last_segment(text::trim(ref));
  return seg.rfind("sitemap", 0) == 0 && seg.size() >= 11 && seg.ends_with(".xml");
}

bool is_sitemap_label(std::string_view label) {
  auto norm = text::collapse_whitespace(text::to_lower_ascii(label));
  return norm.find("sitemap") != std::string::npos || norm.find("site map") != std::string::npos;
}

std::vector<std::string> sitemap_refs(const PageScan& page) {
  std::vector<std::string> refs;
  auto add = [&refs](const std::string& r) {
    if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
  };
  for (const auto& h : page.hrefs) {
    if (is_sitemap_file(h)) add(h);
  }
  for (const auto& a : page.anchors) {
    if (is_sitemap_label(a.label)) add(a.href);
  }
  for (const auto& r : page.sitemap_link_rels) add(r);
  return refs;
}

// Link identity: the resolved absolute URL when the page has an http(s)
// address, otherwise the raw reference (fragment removed).
std::optional<std::string> link_key(std::string_view base, std::string_view href) {
  if (is_absolute_http_url(base)) return resolve_reference(base, href);
  auto ref = text::trim(href);
  if (auto hash = ref.find('#'); hash != std::string_view::npos) ref = ref.substr(0, hash);
  if (ref.empty()) return std::nullopt;
  auto colon = ref.find(':');
  auto slash = ref.find('/');
  if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
    return resolve_reference("http://localhost/", ref);
  }
  return std::string(ref);
}

bool expires_is_fresh(std::string_view value, std::chrono::system_clock::time_point now) {
  auto v = text::to_lower_ascii(text::trim(value));
  if (v == "never") return true;
  if (v.empty()) return false;
  std::string_view digits = v;
  if (digits.front() == '-' || digits.front() == '+') digits.remove_prefix(1);
  bool numeric = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
  if (numeric) return false;  // 0 / -1 mean "already expired"
  auto when = parse_http_date(value);
  return when && *when >= now;
}

std::vector<std::vector<std::string>> term_phrases(const ExpandedQuery& q) {
  std::vector<std::vector<std::string>> phrases;
  for (const auto& term : q.match_terms) {
    auto toks = text::tokenize(term);
    if (!toks.empty()) phrases.push_back(std::move(toks));
  }
  return phrases;
}

std::uint64_t hits_in_tokens(const std::vector<std::string>& field,
                             const std::vector<std::vector<std::string>>& phrases) {
  std::uint64_t total = 0;
  for (const auto& p : phrases) total += text::count_phrase(field, p);
  return total;
}

}  // namespace

// --- parameter metadata ------------------------------------------------------

std::string_view param_name(SeoParam p) {
  switch (p) {
    case SeoParam::TitleMatch: return "title_match";
    case SeoParam::MetaDescription: return "meta_description";
    case SeoParam::MetaKeyword: return "meta_keyword";
    case SeoParam::Snippet: return "snippet";
    case SeoParam::MetaExpires: return "meta_expires";
    case SeoParam::MetaContent: return "meta_content";
    case SeoParam::ImageAlt: return "image_alt";
    case SeoParam::Sitemap: return "sitemap";
    case SeoParam::LinksPresent: return "links_present";
  }
  return "";
}

bool is_binary(SeoParam p) {
  return p == SeoParam::TitleMatch || p == SeoParam::MetaExpires || p == SeoParam::Sitemap;
}

std::uint64_t& SeoFeatureVector::at(SeoParam p) {
  switch (p) {
    case SeoParam::TitleMatch: return title_match;
    case SeoParam::MetaDescription: return meta_description_hits;
    case SeoParam::MetaKeyword: return meta_keyword_hits;
    case SeoParam::Snippet: return snippet_hits;
    case SeoParam::MetaExpires: return meta_expires_fresh;
    case SeoParam::MetaContent: return meta_content_tags;
    case SeoParam::ImageAlt: return img_alt_count;
    case SeoParam::Sitemap: return sitemap_present;
    case SeoParam::LinksPresent: return links_present;
  }
  return links_present;
}

std::uint64_t SeoFeatureVector::at(SeoParam p) const { return const_cast<SeoFeatureVector*>(this)->at(p); }

std::array<double, kSeoParamCount> SeoFeatureVector::values() const {
  std::array<double, kSeoParamCount> v{};
  for (std::size_t i = 0; i < kSeoParamCount; ++i) v[i] = static_cast<double>(at(static_cast<SeoParam>(i)));
  return v;
}

// --- features ------------------------------------------------------------

std::optional<std::chrono::system_clock::time_point> parse_http_date(std::string_view s) {
  static constexpr const char* kFormats[] = {
      "%a, %d %b %Y %H:%M:%S", "%A, %d-%b-%y %H:%M:%S", "%a %b %d %H:%M:%S %Y",
      "%d %b %Y %H:%M:%S",     "%Y-%m-%dT%H:%M:%S",     "%Y-%m-%d %H:%M:%S",
      "%Y-%m-%d",              "%a, %d %b %Y",
  };
  std::string input(text::trim(s));
  for (const char* fmt : kFormats) {
    std::tm tm{};
    std::istringstream in(input);
    in.imbue(std::locale::classic());
    in >> std::get_time(&tm, fmt);
    if (in.fail()) continue;
    std::time_t t = timegm(&tm);
    if (t == static_cast<std::time_t>(-1)) continue;
    return std::chrono::system_clock::from_time_t(t);
  }
  return std::nullopt;
}

std::uint64_t count_term_hits(std::string_view field, const ExpandedQuery& q) {
  return hits_in_tokens(text::tokenize(field), term_phrases(q));
}

SeoFeatureVector extract_features(std::string_view html, const SearchResultRecord& srr,
                                  const ExpandedQuery& q, const FeatureOptions& options) {
  auto decoded = decoded_or_throw(html);
  auto page = scan(decoded);
  auto phrases = term_phrases(q);
  SeoFeatureVector f;

  if (page.title) f.title_match = hits_in_tokens(text::tokenize(*page.title), phrases) > 0 ? 1 : 0;
  if (auto* m = find_meta(page, {"description"}); m && m->content) {
    f.meta_description_hits = hits_in_tokens(text::tokenize(*m->content), phrases);
  }
  if (auto* m = find_meta(page, {"keywords"}); m && m->content) {
    f.meta_keyword_hits = hits_in_tokens(text::tokenize(*m->content), phrases);
  }
  f.snippet_hits = hits_in_tokens(text::tokenize(srr.snippet), phrases);
  if (auto* m = find_meta(page, {"expires"}); m && m->content) {
    f.meta_expires_fresh = expires_is_fresh(*m->content, options.reference_time) ? 1 : 0;
  }
  f.meta_content_tags = static_cast<std::uint64_t>(
      std::count_if(page.metas.begin(), page.metas.end(), [](const MetaElement& m) { return m.content.has_value(); }));
  f.img_alt_count = page.images_with_alt;
  f.sitemap_present = sitemap_refs(page).empty() ? 0 : 1;

  std::set<std::string> distinct;
  for (const auto& h : page.hrefs) {
    if (auto key = link_key(srr.link, h)) distinct.insert(*key);
  }
  f.links_present = distinct.size();
  return f;
}

// --- audit ---------------------------------------------------------------

const std::vector<std::string>& audit_catalog() {
  static const std::vector<std::string> kCatalog = {
      "keywords", "description", "content", "expires",   "revisit",
      "robots",   "distribution", "author", "copyright", "language",
  };
  return kCatalog;
}

const MetaTagStatus& AuditReport::tag(std::string_view name) const {
  for (const auto& t : tags) {
    if (t.tag == name) return t;
  }
  throw Error(ErrorCode::InvalidInput, "unknown audit tag " + std::string(name));
}

AuditReport audit_page(std::string_view html, std::string_view url) {
  auto decoded = decoded_or_throw(html);
  auto page = scan(decoded);
  AuditReport r;
  r.url = std::string(url);
  r.title_text = page.title.value_or("");
  r.title_length = text::utf8_length(r.title_text);
  r.title_too_long = r.title_length > kMaxTitleLength;
  if (r.title_too_long) {
    r.warnings.push_back("title is " + std::to_string(r.title_length) + " characters (limit " +
                         std::to_string(kMaxTitleLength) + ")");
  }

  auto lookup = [&page](const std::string& tag) -> std::optional<std::string> {
    if (tag == "content") {
      for (const auto& m : page.metas) {
        if (m.key == "content-type" && m.content) return *m.content;
        if (m.charset) return "charset=" + *m.charset;
      }
      return std::nullopt;
    }
    const MetaElement* m = nullptr;
    if (tag == "revisit") m = find_meta(page, {"revisit-after", "revisit"});
    else if (tag == "language") m = find_meta(page, {"language", "content-language"});
    else m = find_meta(page, {std::string_view(tag)});
    if (!m) return std::nullopt;
    return m->content.value_or("");
  };
  for (const auto& tag : audit_catalog()) {
    MetaTagStatus s;
    s.tag = tag;
    if (auto v = lookup(tag)) {
      s.present = true;
      s.value = *v;
    }
    r.tags.push_back(std::move(s));
  }
  if (!r.tag("description").present) r.advisories.push_back("missing meta description");

  r.images_total = page.images_total;
  r.images_with_alt = page.images_with_alt;
  r.breadcrumb = page.breadcrumb;
  r.sitemap_refs = sitemap_refs(page);

  std::map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& h : page.hrefs) {
    auto key = link_key(url, h);
    if (!key) continue;
    ++r.links_total;
    if (counts[*key]++ == 0) order.push_back(*key);
  }
  for (const auto& k : order) r.links.push_back({k, counts[k]});
  std::stable_sort(r.links.begin(), r.links.end(),
                   [](const LinkFrequency& a, const LinkFrequency& b) { return a.count > b.count; });
  return r;
}

std::string page_text(std::string_view html) {
  auto page = scan(decoded_or_throw(html));
  return text::collapse_whitespace(page.text);
}

std::vector<std::string> page_links(std::string_view html, std::string_view base_url) {
  auto decoded = html::decode(html);
  if (!decoded) return {};
  auto page = scan(*decoded);
  std::vector<std::string> out;
  for (const auto& h : page.hrefs) {
    if (auto abs = resolve_reference(base_url, h)) out.push_back(*abs);
  }
  return out;
}

// --- page retrieval -------------------------------------------------------

std::optional<std::string> HttpPageSource::fetch(const std::string& url) const {
  auto res = http::get(url, timeout_ms_);
  if (!res.ok()) return std::nullopt;
  return std::move(res.body);
}

std::string FixturePageSource::file_name(std::string_view url) {
  return hash_hex(normalize_url(url).hash) + ".html";
}

std::optional<std::string> FixturePageSource::fetch(const std::string& url) const {
  std::string name;
  try {
    name = file_name(url);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::ifstream in(dir_ + "/" + name, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> fetch_pages(const std::vector<SearchResultRecord>& records,
                                               const PageSource& source, std::size_t concurrency) {
  std::map<std::string, std::string> pages;
  if (records.empty()) return pages;
  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const auto& link = records[i].link;
      std::optional<std::string> body;
      try {
        body = source.fetch(link);
      } catch (const std::exception&) {
        body.reset();
      }
      if (!body) continue;
      std::lock_guard lock(mutex);
      pages.emplace(link, std::move(*body));
    }
  };
  std::size_t n = std::clamp<std::size_t>(concurrency, 1, records.size());
  std::vector<std::jthread> threads;
  threads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return pages;
}

}  // namespace metaseo
