#include "metaseo/merge.hpp"

#include <algorithm>
#include <unordered_set>

#include "metaseo/error.hpp"
#include "metaseo/url.hpp"

namespace metaseo {

std::vector<SearchResultRecord> merge_dedupe(const std::vector<std::vector<SearchResultRecord>>& lists) {
  std::vector<const SearchResultRecord*> interleaved;
  std::size_t longest = 0;
  for (const auto& l : lists) longest = std::max(longest, l.size());
  for (std::size_t slot = 0; slot < longest; ++slot) {
    for (const auto& l : lists) {
      if (slot < l.size()) interleaved.push_back(&l[slot]);
    }
  }

  std::vector<SearchResultRecord> out;
  std::unordered_set<std::uint64_t> seen;
  for (const auto* r : interleaved) {
    if (out.size() == kMaxMergedResults) break;
    std::uint64_t hash = 0;
    try {
      hash = normalize_url(r->link).hash;
    } catch (const Error&) {
      continue;
    }
    if (seen.insert(hash).second) out.push_back(*r);
  }
  return out;
}

}  // namespace metaseo
