#include "metaseo/query.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaseo/error.hpp"
#include "metaseo/http.hpp"
#include "metaseo/text.hpp"
#include "metaseo/url.hpp"

namespace metaseo {
namespace {

// Normalizes a synonym the same way page text is tokenized so that
// multi-word entries match as token runs.
std::string normalize_term(std::string_view term) {
  auto tokens = text::tokenize(term);
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<std::string> string_array(const nlohmann::json& j) {
  std::vector<std::string> out;
  if (!j.is_array()) return out;
  for (const auto& v : j) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(QueryClass c) { return c == QueryClass::Head ? "head" : "tail"; }

Query classify_query(std::string_view raw) {
  Query q;
  q.raw = std::string(raw);
  q.tokens = text::tokenize(raw);
  if (q.tokens.empty()) throw Error(ErrorCode::EmptyQuery, "query is blank");
  q.query_class = q.tokens.size() <= kMaxHeadTokens ? QueryClass::Head : QueryClass::Tail;
  return q;
}

JsonFileSynonyms JsonFileSynonyms::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open synonym file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

JsonFileSynonyms JsonFileSynonyms::parse(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::InvalidConfig, "synonym file must be a JSON object");
  }
  JsonFileSynonyms kb;
  for (const auto& [key, value] : j.items()) {
    kb.entries_.emplace_back(text::to_lower_ascii(key), string_array(value));
  }
  return kb;
}

std::vector<std::string> JsonFileSynonyms::lookup(const std::string& term) const {
  for (const auto& [key, values] : entries_) {
    if (key == term) return values;
  }
  return {};
}

HttpSynonyms::HttpSynonyms(std::string endpoint_template, std::string json_pointer, int timeout_ms)
    : endpoint_template_(std::move(endpoint_template)),
      json_pointer_(std::move(json_pointer)),
      timeout_ms_(timeout_ms) {}

std::vector<std::string> HttpSynonyms::lookup(const std::string& term) const {
  std::string url = endpoint_template_;
  auto pos = url.find("{term}");
  if (pos == std::string::npos) throw Error(ErrorCode::InvalidConfig, "synonym endpoint lacks {term}");
  url.replace(pos, 6, url_encode(term));

  auto res = http::get(url, timeout_ms_);
  if (!res.ok()) {
    throw Error(ErrorCode::ProviderUnavailable,
                "synonym lookup failed: " + (res.error.empty() ? std::to_string(res.status) : res.error));
  }
  auto body = nlohmann::json::parse(res.body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::MalformedResponse, "synonym response is not JSON");
  nlohmann::json::json_pointer ptr(json_pointer_);
  if (!body.contains(ptr)) return {};
  return string_array(body.at(ptr));
}

ExpandedQuery expand_query(const Query& q, const SynonymSource& kb) {
  ExpandedQuery out;
  out.base = q;
  std::set<std::string> own(q.tokens.begin(), q.tokens.end());
  if (q.query_class == QueryClass::Head) {
    for (const auto& token : q.tokens) {
      try {
        for (const auto& syn : kb.lookup(token)) {
          auto norm = normalize_term(syn);
          if (!norm.empty() && !own.contains(norm)) out.synonyms.insert(norm);
        }
      } catch (const std::exception& e) {
        spdlog::warn("synonym lookup for '{}' failed: {}", token, e.what());
      }
    }
  }
  out.match_terms = own;
  out.match_terms.insert(out.synonyms.begin(), out.synonyms.end());
  return out;
}

}  // namespace metaseo
