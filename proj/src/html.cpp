#include "metaseo/html.hpp"

#include <algorithm>
#include <cctype>

#include "metaseo/text.hpp"

namespace metaseo::html {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool iequals_at(std::string_view s, std::size_t pos, std::string_view needle) {
  if (pos + needle.size() > s.size()) return false;
  for (std::size_t i = 0; i < needle.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != needle[i]) return false;
  }
  return true;
}

std::size_t ifind(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (iequals_at(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view doc) : doc_(doc) {}

  std::vector<Token> run() {
    while (pos_ < doc_.size()) {
      if (doc_[pos_] == '<' && start_markup()) continue;
      text_ += doc_[pos_++];
    }
    flush_text();
    return std::move(out_);
  }

 private:
  bool start_markup() {
    std::size_t next = pos_ + 1;
    if (next >= doc_.size()) return false;
    char c = doc_[next];
    if (doc_.compare(next, 3, "!--") == 0) {
      flush_text();
      auto end = doc_.find("-->", next + 3);
      Token t;
      t.kind = Token::Kind::Comment;
      t.text = std::string(doc_.substr(next + 3, end == std::string_view::npos ? std::string_view::npos
                                                                                 : end - next - 3));
      out_.push_back(std::move(t));
      pos_ = end == std::string_view::npos ? doc_.size() : end + 3;
      return true;
    }
    if (c == '!' || c == '?') {
      flush_text();
      auto end = doc_.find('>', next);
      Token t;
      t.kind = Token::Kind::Doctype;
      t.text = std::string(doc_.substr(next + 1, end == std::string_view::npos ? std::string_view::npos
                                                                                 : end - next - 1));
      out_.push_back(std::move(t));
      pos_ = end == std::string_view::npos ? doc_.size() : end + 1;
      return true;
    }
    if (c == '/' && next + 1 < doc_.size() && is_alpha(doc_[next + 1])) {
      flush_text();
      pos_ = next + 1;
      Token t;
      t.kind = Token::Kind::EndTag;
      t.name = read_name();
      auto end = doc_.find('>', pos_);
      pos_ = end == std::string_view::npos ? doc_.size() : end + 1;
      out_.push_back(std::move(t));
      return true;
    }
    if (is_alpha(c)) {
      flush_text();
      pos_ = next;
      Token t;
      t.kind = Token::Kind::StartTag;
      t.name = read_name();
      read_attributes(t);
      std::string name = t.name;
      bool self_closing = t.self_closing;
      out_.push_back(std::move(t));
      if (!self_closing) raw_content(name);
      return true;
    }
    return false;
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < doc_.size() && !is_space(doc_[pos_]) && doc_[pos_] != '/' && doc_[pos_] != '>') ++pos_;
    return text::to_lower_ascii(doc_.substr(start, pos_ - start));
  }

  void read_attributes(Token& t) {
    while (pos_ < doc_.size()) {
      char c = doc_[pos_];
      if (c == '>') {
        ++pos_;
        return;
      }
      if (is_space(c)) {
        ++pos_;
        continue;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < doc_.size() && doc_[pos_] == '>') {
          t.self_closing = true;
          ++pos_;
          return;
        }
        continue;
      }
      if (c == '<') return;  // tag never closed; let the next tag start here

      std::size_t start = pos_;
      while (pos_ < doc_.size() && !is_space(doc_[pos_]) && doc_[pos_] != '=' && doc_[pos_] != '>' &&
             !(doc_[pos_] == '/' && pos_ + 1 < doc_.size() && doc_[pos_ + 1] == '>')) {
        ++pos_;
      }
      if (pos_ == start) {  // lone '=' or similar junk
        ++pos_;
        continue;
      }
      Attribute a;
      a.name = text::to_lower_ascii(doc_.substr(start, pos_ - start));
      std::size_t look = pos_;
      while (look < doc_.size() && is_space(doc_[look])) ++look;
      if (look < doc_.size() && doc_[look] == '=') {
        pos_ = look + 1;
        while (pos_ < doc_.size() && is_space(doc_[pos_])) ++pos_;
        a.value = text::decode_entities(read_value());
      }
      t.attributes.push_back(std::move(a));
    }
  }

  std::string_view read_value() {
    if (pos_ >= doc_.size()) return {};
    char q = doc_[pos_];
    if (q == '"' || q == '\'') {
      auto end = doc_.find(q, pos_ + 1);
      auto gt = doc_.find('>', pos_ + 1);
      // Unbalanced quote: fall back to ending the value at the tag's '>'.
      if (end == std::string_view::npos) end = gt == std::string_view::npos ? doc_.size() : gt;
      auto v = doc_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end < doc_.size() && doc_[end] == q ? end + 1 : end;
      return v;
    }
    std::size_t start = pos_;
    while (pos_ < doc_.size() && !is_space(doc_[pos_]) && doc_[pos_] != '>') ++pos_;
    return doc_.substr(start, pos_ - start);
  }

  void raw_content(const std::string& name) {
    bool skip = name == "script" || name == "style";
    bool rcdata = name == "title" || name == "textarea";
    if (!skip && !rcdata) return;
    std::string closer = "</" + name;
    auto end = ifind(doc_, closer, pos_);
    if (end == std::string_view::npos) {
      // Unclosed title: stop at the next tag so the rest of the page survives.
      end = rcdata ? doc_.find('<', pos_) : doc_.size();
      if (end == std::string_view::npos) end = doc_.size();
      if (rcdata) {
        text_ = std::string(doc_.substr(pos_, end - pos_));
        flush_text();
      }
      pos_ = end;
      return;
    }
    if (rcdata) {
      text_ = std::string(doc_.substr(pos_, end - pos_));
      flush_text();
    }
    pos_ = end;
  }

  void flush_text() {
    if (text_.empty()) return;
    Token t;
    t.kind = Token::Kind::Text;
    t.text = text::decode_entities(text_);
    out_.push_back(std::move(t));
    text_.clear();
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::string text_;
  std::vector<Token> out_;
};

std::string charset_from_content_type(std::string_view ct) {
  auto pos = ifind(ct, "charset", 0);
  if (pos == std::string_view::npos) return {};
  pos += 7;
  while (pos < ct.size() && (is_space(ct[pos]) || ct[pos] == '=')) ++pos;
  if (pos < ct.size() && (ct[pos] == '"' || ct[pos] == '\'')) ++pos;
  std::size_t start = pos;
  while (pos < ct.size() && (std::isalnum(static_cast<unsigned char>(ct[pos])) || ct[pos] == '-' ||
                             ct[pos] == '_' || ct[pos] == ':' || ct[pos] == '.')) {
    ++pos;
  }
  return text::to_lower_ascii(ct.substr(start, pos - start));
}

}  // namespace

std::optional<std::string_view> Token::attr(std::string_view key) const {
  for (const auto& a : attributes) {
    if (a.name == key) return std::string_view(a.value);
  }
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view document) { return Tokenizer(document).run(); }

std::string sniff_charset(std::string_view bytes, std::string_view content_type) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") return "utf-8";
  if (bytes.substr(0, 2) == "\xFF\xFE" || bytes.substr(0, 2) == "\xFE\xFF") return "utf-16";
  if (auto cs = charset_from_content_type(content_type); !cs.empty()) return cs;

  auto head = bytes.substr(0, 4096);
  for (std::size_t at = ifind(head, "<meta", 0); at != std::string_view::npos; at = ifind(head, "<meta", at + 5)) {
    auto end = head.find('>', at);
    auto tag = head.substr(at, end == std::string_view::npos ? std::string_view::npos : end - at);
    if (auto cs = charset_from_content_type(tag); !cs.empty()) return cs;
  }
  return "utf-8";
}

std::optional<std::string> decode(std::string_view bytes, std::string_view content_type) {
  if (bytes.find('\0') != std::string_view::npos) return std::nullopt;
  auto charset = sniff_charset(bytes, content_type);
  if (charset == "utf-8" || charset == "utf8" || charset == "us-ascii" || charset == "ascii") {
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
    if (!text::is_valid_utf8(bytes)) return std::nullopt;
    return std::string(bytes);
  }
  if (charset == "iso-8859-1" || charset == "latin1" || charset == "iso8859-1" || charset == "latin-1") {
    return text::latin1_to_utf8(bytes, false);
  }
  if (charset == "windows-1252" || charset == "cp1252") return text::latin1_to_utf8(bytes, true);
  return std::nullopt;
}

}  // namespace metaseo::html
