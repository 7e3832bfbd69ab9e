#pragma once

#include <cstddef>
#include <vector>

#include "metaseo/providers.hpp"

namespace metaseo {

// Result budget: ten per page, five pages.
inline constexpr std::size_t kPageSize = 10;
inline constexpr std::size_t kMaxPages = 5;
inline constexpr std::size_t kMaxMergedResults = kPageSize * kMaxPages;

// Round-robin interleave of provider lists (given in priority order), then
// first-wins removal of records whose normalized URLs hash equal. Records
// whose link cannot be normalized are dropped.
std::vector<SearchResultRecord> merge_dedupe(const std::vector<std::vector<SearchResultRecord>>& lists);

}  // namespace metaseo
