#include "visrec/server.hpp"

#include <httplib.h>

#include "visrec/error.hpp"
#include "visrec/protocol.hpp"

namespace visrec {

namespace {

// httplib runs routing, the handler and the logger for one request on the same thread.
thread_local std::chrono::steady_clock::time_point request_started;

}  // namespace

struct SegmentationServer::Impl {
  httplib::Server http;
  bool bound = false;
};

SegmentationServer::SegmentationServer(SegmentationConfig cfg, Logger logger)
    : cfg_(cfg), impl_(std::make_unique<Impl>()) {
  cfg_.validate();
  auto& http = impl_->http;

  auto respond = [this](const httplib::Request& req, httplib::Response& res) {
    const auto out = handle_request(req.method, req.body, cfg_);
    res.status = out.status;
    if (out.fallback) res.set_header(kFallbackHeader, "1");
    if (out.rect) res.set_header(kRectHeader, format_rect_header(*out.rect));
    res.set_content(out.body, out.content_type);
  };
  // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
  // server silently share the port.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  http.Post("/", respond);
  http.Get("/", respond);
  http.Put("/", respond);
  http.Patch("/", respond);
  http.Delete("/", respond);
  http.Options("/", respond);

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content("internal error", "text/plain");
  });
  if (logger) {
    http.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
      request_started = std::chrono::steady_clock::now();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    http.set_logger([logger](const httplib::Request& req, const httplib::Response& res) {
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - request_started;
      logger(RequestLogEntry{req.method, req.path, res.status, elapsed.count()});
    });
  }
}

SegmentationServer::~SegmentationServer() { stop(); }

int SegmentationServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port <= 0) {
    throw Error(Errc::connection_failed,
                "cannot bind " + host + ":" + std::to_string(port) + " (address in use?)");
  }
  impl_->bound = true;
  return bound_port;
}

void SegmentationServer::run() {
  if (!impl_->bound) throw Error(Errc::connection_failed, "server is not bound");
  impl_->http.listen_after_bind();
}

void SegmentationServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

bool SegmentationServer::running() const { return impl_->http.is_running(); }

}  // namespace visrec
