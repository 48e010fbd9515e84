#include "visrec/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

#include "visrec/error.hpp"

namespace visrec {

namespace {

constexpr int kMaxDimension = 1 << 16;

void require_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(Errc::invalid_argument, "image dimensions must be positive");
  }
}

// Cursor over a PPM header. Comments run from '#' to end of line.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_uint(const char* what) {
    skip_space_and_comments();
    long long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
      if (++digits > 9) {
        throw Error(Errc::malformed_header, std::string("PPM ") + what + " too large");
      }
    }
    if (digits == 0) {
      throw Error(Errc::malformed_header, std::string("PPM header: expected ") + what);
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance() noexcept { ++pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Image::Image(int width, int height) : width_(width), height_(height) {
  require_dims(width, height);
  data_.assign(pixel_count() * kChannels, 0);
}

Image::Image(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require_dims(width, height);
  if (data_.size() != pixel_count() * kChannels) {
    throw Error(Errc::invalid_argument, "image data length does not match width*height*3");
  }
}

void Image::set_pixel(int x, int y, std::array<std::uint8_t, 3> rgb) {
  for (int c = 0; c < kChannels; ++c) at(x, y, c) = rgb[static_cast<std::size_t>(c)];
}

std::array<std::uint8_t, 3> Image::pixel(int x, int y) const {
  return {at(x, y, 0), at(x, y, 1), at(x, y, 2)};
}

GrayPlane::GrayPlane(int width, int height, double fill) : width_(width), height_(height) {
  require_dims(width, height);
  if (!std::isfinite(fill)) throw Error(Errc::invalid_argument, "plane fill value must be finite");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayPlane::GrayPlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::invalid_argument, "plane data length does not match width*height");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(Errc::invalid_argument, "plane samples must be finite");
  }
}

double GrayPlane::clamped(int x, int y) const noexcept {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return data_[index(x, y)];
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  if (img.empty()) throw Error(Errc::invalid_argument, "cannot encode an empty image");
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + img.data().size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(Errc::malformed_header, "not a binary PPM (missing P6 magic)");
  }
  HeaderReader reader(bytes.subspan(2));
  if (reader.at_end() || !std::isspace(reader.peek())) {
    throw Error(Errc::malformed_header, "PPM header: expected whitespace after magic");
  }
  const int width = reader.read_uint("width");
  const int height = reader.read_uint("height");
  const int maxval = reader.read_uint("maxval");
  if (width < 1 || height < 1 || width > kMaxDimension || height > kMaxDimension) {
    throw Error(Errc::malformed_header, "PPM dimensions out of range");
  }
  if (maxval != 255) {
    throw Error(Errc::malformed_header, "PPM maxval must be 255");
  }
  if (reader.at_end() || !std::isspace(reader.peek())) {
    throw Error(Errc::malformed_header, "PPM header: expected single whitespace before raster");
  }
  reader.advance();

  const std::size_t offset = 2 + reader.pos();
  const std::size_t needed =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Image::kChannels;
  if (bytes.size() - offset < needed) {
    throw Error(Errc::truncated_data, "PPM raster truncated: expected " + std::to_string(needed) +
                                          " bytes, found " + std::to_string(bytes.size() - offset));
  }
  const auto raster = bytes.subspan(offset, needed);
  return Image(width, height, std::vector<std::uint8_t>(raster.begin(), raster.end()));
}

Image load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::file_not_found, "no such image file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_not_found, "cannot open image file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(img);
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    throw Error(Errc::unwritable_path, "path is a directory: " + path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::unwritable_path, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(Errc::unwritable_path, "write failed: " + path.string());
}

bool is_supported_image_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".ppm" || ext == ".pnm";
}

ChannelPlanes split_channels(const Image& img) {
  ChannelPlanes planes{GrayPlane(img.width(), img.height()), GrayPlane(img.width(), img.height()),
                       GrayPlane(img.width(), img.height())};
  const auto src = img.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      planes[c].data()[i] = src[i * 3 + c];
    }
  }
  return planes;
}

Image merge_channels(const ChannelPlanes& planes) {
  const int w = planes[0].width();
  const int h = planes[0].height();
  for (const auto& p : planes) {
    if (p.width() != w || p.height() != h) {
      throw Error(Errc::dimension_mismatch, "channel planes differ in size");
    }
  }
  Image img(w, h);
  auto dst = img.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = std::clamp(std::round(planes[c].data()[i]), 0.0, 255.0);
      dst[i * 3 + c] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

Image crop(const Image& img, const Rect& r) {
  if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 || r.right() > img.width() ||
      r.bottom() > img.height()) {
    throw Error(Errc::out_of_bounds, "crop rectangle outside image");
  }
  Image out(r.w, r.h);
  const auto row_bytes = static_cast<std::size_t>(r.w) * Image::kChannels;
  for (int y = 0; y < r.h; ++y) {
    const auto src = img.data().subspan(
        (static_cast<std::size_t>(r.y + y) * static_cast<std::size_t>(img.width()) +
         static_cast<std::size_t>(r.x)) * Image::kChannels,
        row_bytes);
    std::copy(src.begin(), src.end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * row_bytes));
  }
  return out;
}

double plane_mean(const GrayPlane& p) {
  if (p.empty()) throw Error(Errc::empty_input, "mean of an empty plane");
  // Neumaier compensated sum.
  double sum = 0.0;
  double comp = 0.0;
  for (const double v : p.data()) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / static_cast<double>(p.size());
}

}  // namespace visrec
