#include "visrec/client.hpp"

#include <httplib.h>

#include "visrec/base64.hpp"
#include "visrec/error.hpp"
#include "visrec/protocol.hpp"

namespace visrec {

namespace {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
  constexpr std::string_view scheme = "http://";
  std::string_view rest = url;
  if (rest.substr(0, scheme.size()) == scheme) {
    rest.remove_prefix(scheme.size());
  } else if (rest.find("://") != std::string_view::npos) {
    throw Error(Errc::invalid_argument, "only http:// server URLs are supported: " + url);
  }
  ParsedUrl out;
  const auto slash = rest.find('/');
  if (slash != std::string_view::npos) {
    out.path = std::string(rest.substr(slash));
    rest = rest.substr(0, slash);
  }
  const auto colon = rest.rfind(':');
  if (colon != std::string_view::npos) {
    const auto port_text = std::string(rest.substr(colon + 1));
    try {
      std::size_t used = 0;
      out.port = std::stoi(port_text, &used);
      if (used != port_text.size() || out.port < 1 || out.port > 65535) throw std::out_of_range("");
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "bad port in server URL: " + url);
    }
    rest = rest.substr(0, colon);
  }
  if (rest.empty()) throw Error(Errc::invalid_argument, "missing host in server URL: " + url);
  out.host = std::string(rest);
  return out;
}

}  // namespace

RemoteSegmentation client_segment(const std::string& server_url, const Image& img,
                                  const ClientOptions& options) {
  const auto url = parse_url(server_url);
  const auto body = encode_request(encode_ppm(img), options.image_name);

  httplib::Client http(url.host, url.port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  http.set_connection_timeout(secs.count(), usecs.count());
  http.set_read_timeout(secs.count(), usecs.count());
  http.set_write_timeout(secs.count(), usecs.count());

  const auto res = http.Post(url.path, body, kJsonContentType);
  if (!res) {
    throw Error(Errc::connection_failed,
                "cannot reach " + server_url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(Errc::remote_status,
                "server answered " + std::to_string(res->status) + ": " + res->body);
  }

  RemoteSegmentation out;
  try {
    out.image = decode_ppm(b64_decode(res->body));
  } catch (const Error& e) {
    throw Error(Errc::bad_response, std::string("undecodable segmentation response: ") + e.what());
  }
  out.fallback = res->get_header_value(kFallbackHeader) == "1";
  if (res->has_header(kRectHeader)) out.rect = parse_rect_header(res->get_header_value(kRectHeader));
  return out;
}

}  // namespace visrec
