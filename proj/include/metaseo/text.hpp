#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaseo::text {

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);

// Shared word tokenizer for queries and page text: split on whitespace
// (ASCII and the Unicode space separators), commas and semicolons, strip
// leading/trailing ASCII punctuation from each piece, lowercase. Pieces
// that become empty are dropped.
std::vector<std::string> tokenize(std::string_view s);

// Number of (possibly overlapping) occurrences of `phrase` as a contiguous
// token run inside `haystack`. An empty phrase never matches.
std::size_t count_phrase(std::span<const std::string> haystack,
                         std::span<const std::string> phrase);

// Decodes &amp; &lt; &gt; &quot; &apos; and numeric (&#NN; &#xHH;) entities.
// Anything else is left verbatim.
std::string decode_entities(std::string_view s);

// Removes markup tags and decodes entities. Collapses runs of whitespace.
std::string strip_tags(std::string_view html);

std::string collapse_whitespace(std::string_view s);

bool is_valid_utf8(std::string_view s);
std::size_t utf8_length(std::string_view s);
void append_utf8(std::string& out, char32_t cp);

// ISO-8859-1 / windows-1252 bytes to UTF-8 (C1 range mapped per cp1252).
std::string latin1_to_utf8(std::string_view s, bool cp1252);

}  // namespace metaseo::text
