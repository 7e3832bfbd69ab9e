#include <algorithm>
#include <array>
#include <set>

#include "metaseo/rank.hpp"
#include "metaseo/text.hpp"

namespace metaseo {
namespace {

constexpr std::string_view kStopWords[] = {
    "a",       "about",   "above", "after",   "again",  "against", "all",    "am",     "an",
    "and",     "any",     "are",   "as",      "at",     "be",      "because", "been",  "before",
    "being",   "below",   "between", "both",  "but",    "by",      "can",    "could",  "did",
    "do",      "does",    "doing", "down",    "during", "each",    "few",    "for",    "from",
    "further", "had",     "has",   "have",    "having", "he",      "her",    "here",   "hers",
    "herself", "him",     "himself", "his",   "how",    "i",       "if",     "in",     "into",
    "is",      "it",      "its",   "itself",  "just",   "me",      "more",   "most",   "my",
    "myself",  "no",      "nor",   "not",     "now",    "of",      "off",    "on",     "once",
    "only",    "or",      "other", "our",     "ours",   "ourselves", "out",  "over",   "own",
    "same",    "she",     "should", "so",     "some",   "such",    "than",   "that",   "the",
    "their",   "theirs",  "them",  "themselves", "then", "there",  "these",  "they",   "this",
    "those",   "through", "to",    "too",     "under",  "until",   "up",     "very",   "was",
    "we",      "were",    "what",  "when",    "where",  "which",   "while",  "who",    "whom",
    "why",     "will",    "with",  "would",   "you",    "your",    "yours",  "yourself", "yourselves",
    "s",
};

}  // namespace

bool is_stop_word(std::string_view token) {
  return std::find(std::begin(kStopWords), std::end(kStopWords), token) != std::end(kStopWords);
}

RelevanceBreakdown relevance(std::string_view page_text, const ExpandedQuery& q) {
  RelevanceBreakdown out;
  const auto& tokens = q.base.tokens;
  auto page = text::tokenize(page_text);

  // Contiguous stop-free runs of the query, each split into all substrings.
  std::set<std::vector<std::string>> strings;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (is_stop_word(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < tokens.size() && !is_stop_word(tokens[j])) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = a + 1; b <= j; ++b) {
        strings.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(a),
                        tokens.begin() + static_cast<std::ptrdiff_t>(b));
      }
    }
    i = j;
  }

  std::size_t longest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> found;  // (length, frequency)
  for (const auto& s : strings) {
    auto freq = text::count_phrase(page, s);
    out.z += freq;
    if (freq > 0) {
      found.emplace_back(s.size(), freq);
      longest = std::max(longest, s.size());
    }
  }
  for (const auto& [len, freq] : found) {
    if (len == longest) out.x += freq;
  }
  out.content_weight = out.z == 0 ? 0.0 : static_cast<double>(out.x) / static_cast<double>(out.z);

  std::set<std::string> terms;
  for (const auto& t : tokens) {
    if (!is_stop_word(t)) terms.insert(t);
  }
  out.d = terms.size();
  for (const auto& t : terms) {
    std::array<std::string, 1> one{t};
    if (text::count_phrase(page, one) > 0) ++out.c;
  }
  out.probability_weight = out.d == 0 ? 0.0 : static_cast<double>(out.c) / static_cast<double>(out.d);
  return out;
}

}  // namespace metaseo
