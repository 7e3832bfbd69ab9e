#include "metaseo/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "metaseo/error.hpp"
#include "metaseo/url.hpp"

namespace metaseo {
namespace {

// Scores are snapped to a 1e-12 grid so that weight vectors that differ
// only by a common factor produce identical orderings.
double quantize(double s) { return std::round(s * 1e12) / 1e12; }

std::string canonical_or_raw(const std::string& link) {
  try {
    return normalize_url(link).canonical;
  } catch (const Error&) {
    return link;
  }
}

}  // namespace

WeightVector::WeightVector(const std::array<double, kSeoParamCount>& weights) : weights_(weights) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidInput, "weights must be finite and >= 0");
  }
}

double WeightVector::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

std::vector<NormalizedFeatures> normalize_features(const std::vector<SeoFeatureVector>& set) {
  std::vector<NormalizedFeatures> out(set.size());
  for (std::size_t i = 0; i < kSeoParamCount; ++i) {
    auto param = static_cast<SeoParam>(i);
    if (is_binary(param)) {
      for (std::size_t r = 0; r < set.size(); ++r) out[r][i] = set[r].at(param) > 0 ? 1.0 : 0.0;
      continue;
    }
    std::uint64_t lo = UINT64_MAX;
    std::uint64_t hi = 0;
    for (const auto& f : set) {
      lo = std::min(lo, f.at(param));
      hi = std::max(hi, f.at(param));
    }
    for (std::size_t r = 0; r < set.size(); ++r) {
      auto v = set[r].at(param);
      if (hi == lo) {
        out[r][i] = v > 0 ? 1.0 : 0.0;
      } else {
        out[r][i] = static_cast<double>(v - lo) / static_cast<double>(hi - lo);
      }
    }
  }
  return out;
}

double score(const NormalizedFeatures& normalized, const WeightVector& w) {
  double total = w.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroWeights, "at least one weight must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < kSeoParamCount; ++i) acc += normalized[i] * w.values()[i];
  return std::clamp(quantize(acc / total), 0.0, 1.0);
}

std::vector<RankedResult> rank_results(const std::vector<SearchResultRecord>& merged,
                                       const std::map<std::string, SeoFeatureVector>& features,
                                       const WeightVector& w) {
  if (!(w.sum() > 0.0)) throw Error(ErrorCode::ZeroWeights, "at least one weight must be positive");

  std::unordered_map<std::string, std::size_t> priority;
  for (const auto& r : merged) priority.try_emplace(r.provider_name, priority.size());

  std::vector<RankedResult> ranked;
  ranked.reserve(merged.size());
  std::vector<SeoFeatureVector> vectors;
  for (const auto& r : merged) {
    RankedResult rr;
    rr.srr = r;
    rr.canonical_url = canonical_or_raw(r.link);
    if (auto it = features.find(r.link); it != features.end()) {
      rr.features = it->second;
    } else {
      rr.features_missing = true;
    }
    vectors.push_back(rr.features);
    ranked.push_back(std::move(rr));
  }
  auto normalized = normalize_features(vectors);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    ranked[i].normalized = normalized[i];
    ranked[i].score = score(normalized[i], w);
  }
  std::sort(ranked.begin(), ranked.end(), [&priority](const RankedResult& a, const RankedResult& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.srr.provider_rank != b.srr.provider_rank) return a.srr.provider_rank < b.srr.provider_rank;
    auto pa = priority.at(a.srr.provider_name);
    auto pb = priority.at(b.srr.provider_name);
    if (pa != pb) return pa < pb;
    return a.canonical_url < b.canonical_url;
  });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].final_rank = static_cast<int>(i + 1);
  return ranked;
}

// --- PageRank -----------------------------------------------------------------

std::size_t LinkGraph::add_node(const std::string& name) {
  if (auto i = index(name)) return *i;
  names_.push_back(name);
  out_.emplace_back();
  in_.emplace_back();
  return names_.size() - 1;
}

void LinkGraph::add_edge(const std::string& from, const std::string& to) {
  auto a = add_node(from);
  auto b = add_node(to);
  if (a == b) return;
  if (std::find(out_[a].begin(), out_[a].end(), b) != out_[a].end()) return;
  out_[a].push_back(b);
  in_[b].push_back(a);
}

std::optional<std::size_t> LinkGraph::index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<PageRankVariant> pagerank_variant_from_string(std::string_view s) {
  if (s == "appendix3") return PageRankVariant::Appendix3;
  if (s == "section336") return PageRankVariant::Section336;
  return std::nullopt;
}

std::string_view to_string(PageRankVariant v) {
  return v == PageRankVariant::Appendix3 ? "appendix3" : "section336";
}

std::map<std::string, double> PageRankResult::by_name(const LinkGraph& g) const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[g.name(i)] = scores[i];
  return out;
}

double inlink_mass(const LinkGraph& g, std::size_t node, const std::vector<double>& scores) {
  double sum = 0.0;
  for (auto q : g.in_links(node)) sum += scores[q] / static_cast<double>(g.out_degree(q));
  return sum;
}

PageRankResult pagerank(const LinkGraph& g, const PageRankOptions& options) {
  if (g.size() == 0) throw Error(ErrorCode::InvalidInput, "pagerank needs a nonempty graph");
  if (!(options.tolerance > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw Error(ErrorCode::InvalidInput, "damping must lie in (0,1)");
  }
  const double d = options.damping;
  const auto n = static_cast<double>(g.size());
  double teleport = 0.0;
  double follow = 0.0;
  if (options.variant == PageRankVariant::Appendix3) {
    teleport = 1.0 - d;
    follow = d;
  } else {
    teleport = d / n;
    follow = 1.0 - d;
  }

  PageRankResult result;
  result.scores.assign(g.size(), teleport);
  std::vector<double> next(g.size());
  for (int it = 0; it < options.max_iter; ++it) {
    double delta = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      next[p] = teleport + follow * inlink_mass(g, p, result.scores);
      delta = std::max(delta, std::abs(next[p] - result.scores[p]));
    }
    result.scores.swap(next);
    result.iterations = it + 1;
    result.residual = delta;
    result.residual_history.push_back(delta);
    if (delta < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<double> pagerank_single_pass(const LinkGraph& g, const std::vector<std::string>& order,
                                         double damping) {
  std::vector<double> scores(g.size(), 1.0 - damping);
  for (const auto& name : order) {
    auto p = g.index(name);
    if (!p) throw Error(ErrorCode::InvalidInput, "unknown node " + name);
    scores[*p] = (1.0 - damping) + damping * inlink_mass(g, *p, scores);
  }
  return scores;
}

double combined_rank(const LinkGraph& g, std::size_t page, const RelevanceBreakdown& rel,
                     const std::vector<double>& pagerank_scores, double damping) {
  double r = (rel.content_weight + rel.probability_weight) / 2.0;
  return (1.0 - damping) + damping * r * inlink_mass(g, page, pagerank_scores);
}

std::vector<LinkScores> link_scores(const std::vector<RankedResult>& ranked,
                                    const std::map<std::string, std::string>& pages,
                                    const ExpandedQuery& q, const PageRankOptions& options) {
  std::vector<LinkScores> out(ranked.size());
  if (ranked.empty()) return out;
  LinkGraph g;
  for (const auto& r : ranked) g.add_node(r.canonical_url);
  std::vector<std::string> page_texts(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto it = pages.find(ranked[i].srr.link);
    if (it == pages.end()) continue;
    try {
      page_texts[i] = page_text(it->second);
    } catch (const Error&) {
      continue;
    }
    for (const auto& target : page_links(it->second, ranked[i].srr.link)) {
      std::string canon;
      try {
        canon = normalize_url(target).canonical;
      } catch (const Error&) {
        continue;
      }
      if (g.index(canon)) g.add_edge(ranked[i].canonical_url, canon);
    }
  }
  auto pr = pagerank(g, options);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto node = *g.index(ranked[i].canonical_url);
    out[i].pagerank = pr.scores[node];
    out[i].relevance = relevance(page_texts[i], q);
    out[i].combined = combined_rank(g, node, out[i].relevance, pr.scores, options.damping);
  }
  return out;
}

}  // namespace metaseo
