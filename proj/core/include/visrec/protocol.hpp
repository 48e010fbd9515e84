#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "visrec/image.hpp"
#include "visrec/segmentation.hpp"

namespace visrec {

inline constexpr const char* kJsonContentType = "application/json;charset=UTF-8";
inline constexpr const char* kFallbackHeader = "X-Seg-Fallback";
inline constexpr const char* kRectHeader = "X-Seg-Rect";

struct SegmentationRequest {
  std::vector<std::uint8_t> image_bytes;
  std::string image_name;
};

/// Compact JSON object {"imageName": ..., "imageString": <base64>}.
std::string encode_request(std::span<const std::uint8_t> image_bytes, const std::string& image_name);

/// Throws malformed_json, missing_field or invalid_base64.
SegmentationRequest decode_request(std::string_view message);

struct SegmentationResponse {
  int status = 200;
  std::string body;                  // base64 image on 200, short reason otherwise
  std::string content_type = "text/plain";
  bool fallback = false;             // no object found, body holds the input image
  std::optional<Rect> rect;          // bounding rect of the segmented object
};

/// Server-side handling of one request, independent of any transport.
/// Non-POST -> 405, bad request -> 400, pipeline failure -> 500.
SegmentationResponse handle_request(std::string_view method, std::string_view body,
                                    const SegmentationConfig& cfg);
SegmentationResponse handle_request(const SegmentationRequest& req, const SegmentationConfig& cfg);

std::string format_rect_header(const Rect& r);
std::optional<Rect> parse_rect_header(std::string_view text);

}  // namespace visrec
