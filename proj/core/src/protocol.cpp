#include "visrec/protocol.hpp"

#include <charconv>
#include <json.hpp>

#include "visrec/base64.hpp"
#include "visrec/error.hpp"

namespace visrec {

namespace {

SegmentationResponse error_response(int status, std::string reason) {
  SegmentationResponse r;
  r.status = status;
  r.body = std::move(reason);
  return r;
}

}  // namespace

std::string encode_request(std::span<const std::uint8_t> image_bytes, const std::string& image_name) {
  if (image_bytes.empty()) throw Error(Errc::empty_input, "request payload is empty");
  if (image_name.empty()) throw Error(Errc::invalid_argument, "request image name is empty");
  nlohmann::json msg = nlohmann::json::object();
  msg["imageString"] = b64_encode(image_bytes);
  msg["imageName"] = image_name;
  return msg.dump();
}

SegmentationRequest decode_request(std::string_view message) {
  const auto msg = nlohmann::json::parse(message, nullptr, /*allow_exceptions=*/false);
  if (msg.is_discarded() || !msg.is_object()) {
    throw Error(Errc::malformed_json, "request body is not a JSON object");
  }
  auto string_field = [&](const char* name) -> const std::string& {
    const auto it = msg.find(name);
    if (it == msg.end() || !it->is_string()) {
      throw Error(Errc::missing_field, std::string("missing string field '") + name + "'");
    }
    return it->get_ref<const std::string&>();
  };
  SegmentationRequest req;
  req.image_name = string_field("imageName");
  if (req.image_name.empty()) throw Error(Errc::missing_field, "imageName is empty");
  req.image_bytes = b64_decode(string_field("imageString"));
  if (req.image_bytes.empty()) throw Error(Errc::missing_field, "imageString decodes to nothing");
  return req;
}

SegmentationResponse handle_request(const SegmentationRequest& req, const SegmentationConfig& cfg) {
  Image input;
  try {
    input = decode_ppm(req.image_bytes);
  } catch (const Error& e) {
    return error_response(400, std::string("undecodable image: ") + e.what());
  }
  if (input.width() < 3 || input.height() < 3) {
    return error_response(400, "image must be at least 3x3");
  }

  SegmentationResponse resp;
  resp.content_type = "text/plain";
  try {
    auto result = segment(input, cfg);
    resp.rect = result.rect;
    resp.body = b64_encode(encode_ppm(result.image));
  } catch (const Error& e) {
    if (e.code() != Errc::no_object_found) return error_response(500, e.what());
    resp.fallback = true;
    resp.body = b64_encode(encode_ppm(input));
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
  return resp;
}

SegmentationResponse handle_request(std::string_view method, std::string_view body,
                                    const SegmentationConfig& cfg) {
  if (method != "POST") return error_response(405, "method not allowed; use POST");
  SegmentationRequest req;
  try {
    req = decode_request(body);
  } catch (const Error& e) {
    return error_response(400, std::string(errc_name(e.code())) + ": " + e.what());
  }
  return handle_request(req, cfg);
}

std::string format_rect_header(const Rect& r) {
  return std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
         std::to_string(r.h);
}

std::optional<Rect> parse_rect_header(std::string_view text) {
  int v[4] = {0, 0, 0, 0};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 4; ++i) {
    const auto [next, ec] = std::from_chars(p, end, v[i]);
    if (ec != std::errc{}) return std::nullopt;
    p = next;
    if (i < 3) {
      if (p == end || *p != ',') return std::nullopt;
      ++p;
    }
  }
  if (p != end || v[2] < 1 || v[3] < 1) return std::nullopt;
  return Rect{v[0], v[1], v[2], v[3]};
}

}  // namespace visrec
