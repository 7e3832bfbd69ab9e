#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace metaseo {

enum class QueryClass { Head, Tail };

std::string_view to_string(QueryClass c);

// Head terms are one or two words; three or more words make a tail term.
inline constexpr std::size_t kMaxHeadTokens = 2;

struct Query {
  std::string raw;
  std::vector<std::string> tokens;
  QueryClass query_class = QueryClass::Head;
};

struct ExpandedQuery {
  Query base;
  std::set<std::string> synonyms;
  std::set<std::string> match_terms;
};

// Throws Error(EmptyQuery) when nothing survives tokenization.
Query classify_query(std::string_view raw);

// Lookup of synonyms for a single lowercase term. Implementations may throw
// on transport failure; expand_query swallows those.
class SynonymSource {
 public:
  virtual ~SynonymSource() = default;
  virtual std::vector<std::string> lookup(const std::string& term) const = 0;
};

// {"term": ["synonym", ...]} loaded once from a UTF-8 JSON file.
class JsonFileSynonyms final : public SynonymSource {
 public:
  static JsonFileSynonyms load(const std::string& path);
  static JsonFileSynonyms parse(std::string_view json_text);

  std::vector<std::string> lookup(const std::string& term) const override;

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> entries_;
};

// GET endpoint with "{term}" substituted (URL-encoded); the synonym array is
// found at `json_pointer` in the response body.
class HttpSynonyms final : public SynonymSource {
 public:
  HttpSynonyms(std::string endpoint_template, std::string json_pointer,
               int timeout_ms = 3000);

  std::vector<std::string> lookup(const std::string& term) const override;

 private:
  std::string endpoint_template_;
  std::string json_pointer_;
  int timeout_ms_;
};

class NoSynonyms final : public SynonymSource {
 public:
  std::vector<std::string> lookup(const std::string&) const override { return {}; }
};

ExpandedQuery expand_query(const Query& q, const SynonymSource& kb);

}  // namespace metaseo
