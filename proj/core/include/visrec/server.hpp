#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "visrec/segmentation.hpp"

namespace visrec {

struct RequestLogEntry {
  std::string method;
  std::string path;
  int status = 0;
  double millis = 0.0;
};

/// HTTP front end for handle_request: POST / with a JSON body.
/// The segmentation config is fixed at construction; requests share nothing else.
class SegmentationServer {
 public:
  using Logger = std::function<void(const RequestLogEntry&)>;

  explicit SegmentationServer(SegmentationConfig cfg, Logger logger = {});
  ~SegmentationServer();
  SegmentationServer(const SegmentationServer&) = delete;
  SegmentationServer& operator=(const SegmentationServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port. Throws Error(connection_failed) when the address cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  void run();
  void stop();
  bool running() const;

  const SegmentationConfig& config() const noexcept { return cfg_; }

 private:
  struct Impl;
  SegmentationConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace visrec
