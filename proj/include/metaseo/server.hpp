#pragma once

#include <memory>
#include <string>

#include "metaseo/engine.hpp"

namespace metaseo {

// Status code and JSON body for a search request; shared by the HTTP
// handler and tests.
struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// GET /api/search?q=...&page=N. Blank query -> 400, page outside 1..5 -> 400,
// every provider failing -> 502 with a human-readable message.
HttpReply handle_search(SearchEngine& engine, const std::string& q, const std::string& page);

class SearchServer {
 public:
  explicit SearchServer(SearchEngine& engine);
  ~SearchServer();
  SearchServer(const SearchServer&) = delete;
  SearchServer& operator=(const SearchServer&) = delete;

  // Binds and returns the actual port (0 picks an ephemeral one).
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace metaseo
