#include "metaseo/server.hpp"

#include <charconv>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaseo/error.hpp"

namespace metaseo {
namespace {

std::string error_body(std::string_view code, std::string_view message) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  return j.dump() + "\n";
}

}  // namespace

HttpReply handle_search(SearchEngine& engine, const std::string& q, const std::string& page) {
  int page_no = 1;
  if (!page.empty()) {
    auto [ptr, ec] = std::from_chars(page.data(), page.data() + page.size(), page_no);
    if (ec != std::errc() || ptr != page.data() + page.size()) {
      return {400, error_body("PageOutOfRange", "page must be an integer between 1 and 5")};
    }
  }
  try {
    return {200, to_json(engine.search(q, page_no))};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::EmptyQuery:
      case ErrorCode::PageOutOfRange:
        return {400, error_body(to_string(e.code()), e.what())};
      case ErrorCode::AllProvidersFailed:
        return {502, error_body(to_string(e.code()),
                                "The search providers could not be reached, so no results are available. "
                                "Please try again in a few minutes.")};
      default:
        return {500, error_body(to_string(e.code()), e.what())};
    }
  } catch (const std::exception& e) {
    spdlog::error("search failed: {}", e.what());
    return {500, error_body("Internal", "unexpected server error")};
  }
}

struct SearchServer::Impl {
  SearchEngine& engine;
  httplib::Server server;
  explicit Impl(SearchEngine& e) : engine(e) {}
};

SearchServer::SearchServer(SearchEngine& engine) : impl_(std::make_unique<Impl>(engine)) {
  auto& srv = impl_->server;
  srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
  srv.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
    auto reply = handle_search(impl_->engine, req.get_param_value("q"), req.get_param_value("page"));
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  });
  if (const auto& dir = engine.config().static_dir; !dir.empty()) {
    if (!srv.set_mount_point("/", dir)) spdlog::warn("static directory {} not found", dir);
  }
}

SearchServer::~SearchServer() { stop(); }

int SearchServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void SearchServer::listen() { impl_->server.listen_after_bind(); }

void SearchServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace metaseo
