#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaseo/providers.hpp"
#include "metaseo/query.hpp"
#include "metaseo/seo.hpp"

namespace metaseo {

using NormalizedFeatures = std::array<double, kSeoParamCount>;

// One nonnegative weight per ranking parameter; uniform by default.
class WeightVector {
 public:
  WeightVector() { weights_.fill(1.0); }
  // Throws Error(InvalidInput) for negative or non-finite weights.
  explicit WeightVector(const std::array<double, kSeoParamCount>& weights);

  const std::array<double, kSeoParamCount>& values() const { return weights_; }
  double sum() const;

 private:
  std::array<double, kSeoParamCount> weights_{};
};

// Binary parameters pass through; counts are min-max scaled over the set.
// A constant count column maps to 1 where the value is positive, else 0.
std::vector<NormalizedFeatures> normalize_features(const std::vector<SeoFeatureVector>& set);

// Weighted mean of the normalized parameters, in [0,1].
// Throws Error(ZeroWeights) when every weight is zero.
double score(const NormalizedFeatures& normalized, const WeightVector& w);

struct RankedResult {
  SearchResultRecord srr;
  std::string canonical_url;
  SeoFeatureVector features;
  bool features_missing = false;  // page absent or undecodable; zero vector used
  NormalizedFeatures normalized{};
  double score = 0.0;
  int final_rank = 0;
};

// Sort by score descending; ties go to the better provider rank, then the
// higher-priority provider (first to appear in `merged`), then the
// canonical URL. Output is a permutation of `merged`.
std::vector<RankedResult> rank_results(const std::vector<SearchResultRecord>& merged,
                                       const std::map<std::string, SeoFeatureVector>& features,
                                       const WeightVector& w);

// ---------------------------------------------------------------------------

inline constexpr double kDefaultDamping = 0.85;

class LinkGraph {
 public:
  std::size_t add_node(const std::string& name);  // idempotent
  // Self-links and repeated links are ignored.
  void add_edge(const std::string& from, const std::string& to);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index(std::string_view name) const;
  std::size_t out_degree(std::size_t i) const { return out_[i].size(); }
  const std::vector<std::size_t>& in_links(std::size_t i) const { return in_[i]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

enum class PageRankVariant {
  // PR(p) = (1-d) + d * sum PR(q)/C(q)
  Appendix3,
  // R(p) = d/n + (1-d) * sum R(q)/C(q)
  Section336,
};

std::optional<PageRankVariant> pagerank_variant_from_string(std::string_view s);
std::string_view to_string(PageRankVariant v);

struct PageRankOptions {
  double damping = kDefaultDamping;
  double tolerance = 1e-9;
  int max_iter = 200;
  PageRankVariant variant = PageRankVariant::Appendix3;
};

struct PageRankResult {
  std::vector<double> scores;  // indexed like the graph's nodes
  int iterations = 0;
  bool converged = false;      // false means NoConvergence; scores hold the last iterate
  double residual = 0.0;       // max |delta| of the final iteration
  std::vector<double> residual_history;

  std::map<std::string, double> by_name(const LinkGraph& g) const;
};

// Synchronous fixed-point iteration from the teleport term. Dangling nodes
// keep their mass. Throws Error(InvalidInput) for an empty graph or tol <= 0.
PageRankResult pagerank(const LinkGraph& g, const PageRankOptions& options = {});

// One in-place sweep over `order` starting from (1-d) everywhere, so a node
// sees values already updated earlier in the sweep (the hand-evaluation
// procedure for small acyclic examples).
std::vector<double> pagerank_single_pass(const LinkGraph& g, const std::vector<std::string>& order,
                                         double damping = kDefaultDamping);

// Sum over in-links q of PR(q)/C(q).
double inlink_mass(const LinkGraph& g, std::size_t node, const std::vector<double>& scores);

// ---------------------------------------------------------------------------

struct RelevanceBreakdown {
  double content_weight = 0.0;      // CW = X/Z
  double probability_weight = 0.0;  // PW = C/D
  std::size_t x = 0;  // frequency of the longest query strings found
  std::size_t z = 0;  // frequency of all query strings
  std::size_t c = 0;  // distinct query terms present
  std::size_t d = 0;  // distinct non-stop query terms
};

bool is_stop_word(std::string_view token);

// Query strings are the contiguous runs of query tokens containing no stop
// word; frequencies are token-run occurrences in the page text.
RelevanceBreakdown relevance(std::string_view page_text, const ExpandedQuery& q);

// Relevance-modulated PageRank: (1-d) + d * (CW+PW)/2 * inlink mass.
double combined_rank(const LinkGraph& g, std::size_t page, const RelevanceBreakdown& rel,
                     const std::vector<double>& pagerank_scores, double damping = kDefaultDamping);

struct LinkScores {
  double pagerank = 0.0;
  RelevanceBreakdown relevance;
  double combined = 0.0;
};

// Builds the link graph among the ranked results' pages (edges are links
// from one result page to another result's canonical URL), then computes
// PageRank, relevance and the combined rank per result, in `ranked` order.
std::vector<LinkScores> link_scores(const std::vector<RankedResult>& ranked,
                                    const std::map<std::string, std::string>& pages,
                                    const ExpandedQuery& q, const PageRankOptions& options = {});

}  // namespace metaseo
