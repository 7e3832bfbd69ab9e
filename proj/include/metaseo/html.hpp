#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metaseo::html {

struct Attribute {
  std::string name;   // lowercase
  std::string value;  // entity-decoded
};

struct Token {
  enum class Kind { StartTag, EndTag, Text, Comment, Doctype };
  Kind kind = Kind::Text;
  std::string name;  // lowercase tag name for tags
  std::vector<Attribute> attributes;
  std::string text;  // decoded text, comment body or doctype body
  bool self_closing = false;

  std::optional<std::string_view> attr(std::string_view name) const;
};

// Tolerant tokenizer: unterminated tags, stray '<', unquoted or unbalanced
// attribute quotes and missing end tags never fail. Contents of script and
// style are skipped; title and textarea contents are returned as text.
std::vector<Token> tokenize(std::string_view document);

// Charset taken from a byte-order mark, the Content-Type value if given,
// or a <meta charset> / http-equiv declaration in the first 4 KiB.
// Defaults to "utf-8". Result is lowercase.
std::string sniff_charset(std::string_view bytes, std::string_view content_type = {});

// Returns the document as UTF-8, or nullopt when the charset is unsupported
// or the bytes are not valid in it.
std::optional<std::string> decode(std::string_view bytes, std::string_view content_type = {});

}  // namespace metaseo::html
