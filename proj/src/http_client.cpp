#include "metaseo/http.hpp"

#include <httplib.h>

#include "metaseo/url.hpp"

namespace metaseo::http {

Response get(std::string_view url, int timeout_ms) {
  Response out;
  auto parts = parse_http_url(url);
  if (!parts) {
    out.error = "invalid URL";
    return out;
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (parts->scheme == "https") {
    out.error = "https not supported in this build";
    return out;
  }
#endif
  std::string origin = parts->scheme + "://" + parts->host;
  if (parts->port) origin += ":" + std::to_string(*parts->port);
  std::string target = parts->path.empty() ? "/" : parts->path;
  if (parts->has_query) target += "?" + parts->query;

  httplib::Client client(origin);
  auto seconds = timeout_ms / 1000;
  auto micros = (timeout_ms % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  client.set_follow_location(true);

  auto res = client.Get(target);
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = std::move(res->body);
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

}  // namespace metaseo::http
