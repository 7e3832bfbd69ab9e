#pragma once

#include <string>
#include <string_view>

namespace metaseo::http {

struct Response {
  int status = 0;  // 0 when the request never got a response
  std::string body;
  std::string content_type;
  std::string error;  // transport error description, empty on success

  bool ok() const { return error.empty() && status >= 200 && status < 300; }
};

// Blocking GET of an absolute http(s) URL. Follows redirects. Never throws
// for transport problems; they are reported in Response::error.
Response get(std::string_view url, int timeout_ms);

}  // namespace metaseo::http
