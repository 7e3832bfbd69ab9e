#include "metaseo/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace metaseo::text {
namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_separator_ascii(unsigned char c) {
  return is_ascii_space(c) || c == ',' || c == ';';
}

// Length in bytes of a Unicode space separator starting at s[i], or 0.
std::size_t unicode_space_at(std::string_view s, std::size_t i) {
  auto b = [&](std::size_t k) -> unsigned char {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0;
  };
  if (b(0) == 0xC2 && (b(1) == 0x85 || b(1) == 0xA0)) return 2;
  if (b(0) == 0xE1 && b(1) == 0x9A && b(2) == 0x80) return 3;  // U+1680
  if (b(0) == 0xE2 && b(1) == 0x80) {
    unsigned char c = b(2);
    if ((c >= 0x80 && c <= 0x8A) || c == 0xA8 || c == 0xA9 || c == 0xAF) return 3;
  }
  if (b(0) == 0xE2 && b(1) == 0x81 && b(2) == 0x9F) return 3;  // U+205F
  if (b(0) == 0xE3 && b(1) == 0x80 && b(2) == 0x80) return 3;  // U+3000
  return 0;
}

std::string_view strip_punct(std::string_view s) {
  auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && punct(s.back())) s.remove_suffix(1);
  return s;
}

// cp1252 0x80..0x9F; zero means undefined, mapped to U+FFFD.
constexpr std::array<char16_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ascii_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    auto piece = strip_punct(s.substr(start, end - start));
    if (!piece.empty()) tokens.push_back(to_lower_ascii(piece));
  };
  while (i < s.size()) {
    if (is_separator_ascii(static_cast<unsigned char>(s[i]))) {
      flush(i);
      start = ++i;
    } else if (std::size_t n = unicode_space_at(s, i); n > 0) {
      flush(i);
      i += n;
      start = i;
    } else {
      ++i;
    }
  }
  flush(s.size());
  return tokens;
}

std::size_t count_phrase(std::span<const std::string> haystack,
                         std::span<const std::string> phrase) {
  if (phrase.empty() || phrase.size() > haystack.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + phrase.size() <= haystack.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
    }
  }
  return count;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += s[i++];
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    bool done = true;
    if (name == "amp") out += '&';
    else if (name == "lt") out += '<';
    else if (name == "gt") out += '>';
    else if (name == "quot") out += '"';
    else if (name == "apos") out += '\'';
    else if (name.size() >= 2 && name[0] == '#') {
      unsigned long cp = 0;
      const char* first = name.data() + 1;
      const char* last = name.data() + name.size();
      int base = 10;
      if (*first == 'x' || *first == 'X') {
        base = 16;
        ++first;
      }
      auto [ptr, ec] = std::from_chars(first, last, cp, base);
      if (ec == std::errc() && ptr == last && first != last) {
        append_utf8(out, static_cast<char32_t>(std::min<unsigned long>(cp, 0x110000)));
      } else {
        done = false;
      }
    } else {
      done = false;
    }
    if (done) {
      i = semi + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_ascii_space(static_cast<unsigned char>(c))) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

namespace {

// Inline markup vanishes without a gap so "<b>x</b>," stays "x,".
bool is_inline_tag(std::string_view inner) {
  if (!inner.empty() && inner.front() == '/') inner.remove_prefix(1);
  auto end = inner.find_first_of(" \t\r\n/");
  auto name = to_lower_ascii(inner.substr(0, end));
  static constexpr std::string_view kInline[] = {"b",    "i",   "em",   "strong", "span", "a",   "u",
                                                 "font", "small", "big", "sup",    "sub",  "mark", "wbr"};
  return std::find(std::begin(kInline), std::end(kInline), name) != std::end(kInline);
}

}  // namespace

std::string strip_tags(std::string_view html) {
  std::string raw;
  raw.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    bool starts_tag = c == '<' && i + 1 < html.size() &&
                      (std::isalpha(static_cast<unsigned char>(html[i + 1])) ||
                       html[i + 1] == '/' || html[i + 1] == '!' || html[i + 1] == '?');
    if (!starts_tag) {
      raw += c;
      ++i;
      continue;
    }
    auto close = html.find('>', i + 1);
    if (close == std::string_view::npos) break;
    if (!is_inline_tag(html.substr(i + 1, close - i - 1))) raw += ' ';
    i = close + 1;
  }
  return collapse_whitespace(decode_entities(raw));
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size()) return false;
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += n + 1;
  }
  return true;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string latin1_to_utf8(std::string_view s, bool cp1252) {
  std::string out;
  out.reserve(s.size() + s.size() / 4);
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (cp1252 && c >= 0x80 && c <= 0x9F) {
      char16_t mapped = kCp1252High[c - 0x80];
      append_utf8(out, mapped != 0 ? mapped : 0xFFFD);
    } else {
      append_utf8(out, c);
    }
  }
  return out;
}

}  // namespace metaseo::text
