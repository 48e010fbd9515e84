#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "visrec/image.hpp"

namespace visrec {

struct ClientOptions {
  std::chrono::milliseconds timeout{30000};
  std::string image_name = "image.ppm";
};

struct RemoteSegmentation {
  Image image;
  bool fallback = false;       // server found no object and echoed the input
  std::optional<Rect> rect;    // present when the server reports it
};

/// POSTs the image to `server_url` ("http://host:port[/path]") and decodes the
/// segmented result. Throws connection_failed, remote_status (non-200) or
/// bad_response (undecodable body).
RemoteSegmentation client_segment(const std::string& server_url, const Image& img,
                                  const ClientOptions& options = {});

}  // namespace visrec
