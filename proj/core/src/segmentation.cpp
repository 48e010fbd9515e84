#include "visrec/segmentation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "visrec/error.hpp"

namespace visrec {

namespace {

void require_same_dims(const GrayPlane& a, const GrayPlane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::dimension_mismatch, "planes differ in size");
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

GaussianKernel make_gaussian_kernel(int size) {
  if (size < 1 || size % 2 == 0) {
    throw Error(Errc::invalid_argument,
                "gaussian kernel size must be odd and positive, got " + std::to_string(size));
  }
  GaussianKernel k;
  k.size = size;
  k.sigma = 0.3 * ((size - 1) * 0.5 - 1.0) + 0.8;
  k.weights.resize(static_cast<std::size_t>(size));
  const int center = size / 2;
  const double denom = 2.0 * k.sigma * k.sigma;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    k.weights[static_cast<std::size_t>(i)] = std::exp(-(d * d) / denom);
    sum += k.weights[static_cast<std::size_t>(i)];
  }
  for (auto& w : k.weights) w /= sum;
  // Mirror so the taps are exactly symmetric.
  for (int i = 0; i < center; ++i) {
    k.weights[static_cast<std::size_t>(size - 1 - i)] = k.weights[static_cast<std::size_t>(i)];
  }
  return k;
}

GrayPlane gaussian_blur(const GrayPlane& p, const GaussianKernel& k) {
  if (p.empty()) throw Error(Errc::empty_input, "cannot blur an empty plane");
  const int w = p.width();
  const int h = p.height();
  const int radius = k.size / 2;

  GrayPlane horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += k.weights[static_cast<std::size_t>(t + radius)] * p.clamped(x + t, y);
      }
      horizontal.at(x, y) = acc;
    }
  }
  GrayPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += k.weights[static_cast<std::size_t>(t + radius)] * horizontal.clamped(x, y + t);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GrayPlane sobel_edges(const GrayPlane& p) {
  if (p.width() < 3 || p.height() < 3) {
    throw Error(Errc::invalid_argument, "sobel_edges needs a plane of at least 3x3");
  }
  const int w = p.width();
  const int h = p.height();
  GrayPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double tl = p.clamped(x - 1, y - 1), tc = p.clamped(x, y - 1), tr = p.clamped(x + 1, y - 1);
      const double ml = p.clamped(x - 1, y), mr = p.clamped(x + 1, y);
      const double bl = p.clamped(x - 1, y + 1), bc = p.clamped(x, y + 1), br = p.clamped(x + 1, y + 1);
      const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
      const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
      out.at(x, y) = std::hypot(gx, gy);
    }
  }
  return out;
}

GrayPlane combine_channel_edges(const GrayPlane& r, const GrayPlane& g, const GrayPlane& b) {
  require_same_dims(r, g);
  require_same_dims(r, b);
  GrayPlane out(r.width(), r.height());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.data()[i] = std::max({r.data()[i], g.data()[i], b.data()[i]});
  }
  return out;
}

GrayPlane suppress_below_mean(const GrayPlane& p) {
  const double mean = plane_mean(p);
  GrayPlane out = p;
  for (auto& v : out.data()) {
    if (v < mean) v = 0.0;
  }
  return out;
}

GrayPlane binarize(const GrayPlane& p) {
  GrayPlane out = p;
  for (auto& v : out.data()) v = v > 0.0 ? 1.0 : 0.0;
  return out;
}

void SegmentationConfig::validate() const {
  if (blur_kernel_size < 1 || blur_kernel_size % 2 == 0) {
    throw Error(Errc::invalid_argument, "blur_kernel_size must be odd and positive");
  }
  if (!(min_area_fraction >= 0.0 && min_area_fraction < 1.0)) {
    throw Error(Errc::invalid_argument, "min_area_fraction must lie in [0, 1)");
  }
}

OutputMode parse_output_mode(const std::string& text) {
  if (text == "crop") return OutputMode::crop;
  if (text == "mask") return OutputMode::mask;
  throw Error(Errc::invalid_argument, "output_mode must be 'crop' or 'mask', got '" + text + "'");
}

std::string to_string(OutputMode mode) { return mode == OutputMode::crop ? "crop" : "mask"; }

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, "cannot read config file: " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::invalid_argument,
                  path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    values[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
  }
  return values;
}

SegmentationConfig segmentation_config_from(const std::map<std::string, std::string>& values,
                                            SegmentationConfig base) {
  auto number = [](const std::string& key, const std::string& raw) {
    std::istringstream is(raw);
    double v = 0.0;
    if (!(is >> v) || !is.eof()) {
      throw Error(Errc::invalid_argument, key + ": not a number: '" + raw + "'");
    }
    return v;
  };
  if (auto it = values.find("blur_kernel_size"); it != values.end()) {
    const double v = number(it->first, it->second);
    if (v != std::floor(v)) throw Error(Errc::invalid_argument, "blur_kernel_size must be an integer");
    base.blur_kernel_size = static_cast<int>(v);
  }
  if (auto it = values.find("min_area_fraction"); it != values.end()) {
    base.min_area_fraction = number(it->first, it->second);
  }
  if (auto it = values.find("output_mode"); it != values.end()) {
    base.output_mode = parse_output_mode(it->second);
  }
  base.validate();
  return base;
}

SegmentationConfig load_segmentation_config(const std::filesystem::path& path) {
  return segmentation_config_from(read_key_value_file(path));
}

GrayPlane edge_mask(const Image& img, const SegmentationConfig& cfg) {
  cfg.validate();
  if (img.width() < 3 || img.height() < 3) {
    throw Error(Errc::invalid_argument, "segmentation needs an image of at least 3x3");
  }
  const auto kernel = make_gaussian_kernel(cfg.blur_kernel_size);
  auto planes = split_channels(img);
  for (auto& plane : planes) {
    plane = sobel_edges(gaussian_blur(plane, kernel));
  }
  const auto edges = combine_channel_edges(planes[0], planes[1], planes[2]);
  return binarize(suppress_below_mean(edges));
}

SegmentationResult segment(const Image& img, const SegmentationConfig& cfg) {
  const auto mask = edge_mask(img, cfg);
  const auto contours = filter_contours(find_contours(mask), img.pixel_count(), cfg.min_area_fraction);
  if (contours.empty()) {
    throw Error(Errc::no_object_found, "no contour covers the minimum area");
  }

  SegmentationResult result;
  result.contour = largest_contour(contours);
  result.contour.parent.reset();
  result.rect = result.contour.bounding_rect();
  if (cfg.output_mode == OutputMode::crop) {
    result.image = crop(img, result.rect);
  } else {
    result.image = Image(img.width(), img.height());
    const auto& r = result.rect;
    for (int y = r.y; y < r.bottom(); ++y) {
      for (int x = r.x; x < r.right(); ++x) result.image.set_pixel(x, y, img.pixel(x, y));
    }
  }
  return result;
}

}  // namespace visrec
