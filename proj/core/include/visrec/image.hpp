#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace visrec {

/// Interleaved 8-bit RGB raster, row-major, channel order R,G,B.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  /// Black image of the given size.
  Image(int width, int height);
  Image(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::uint8_t at(int x, int y, int c) const { return data_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return data_[index(x, y, c)]; }

  void set_pixel(int x, int y, std::array<std::uint8_t, 3> rgb);
  std::array<std::uint8_t, 3> pixel(int x, int y) const;

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * kChannels + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Single-channel floating-point raster used between pipeline stages.
class GrayPlane {
 public:
  GrayPlane() = default;
  GrayPlane(int width, int height, double fill = 0.0);
  GrayPlane(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double at(int x, int y) const { return data_[index(x, y)]; }
  double& at(int x, int y) { return data_[index(x, y)]; }

  /// Edge-replicate access: coordinates are clamped into the plane.
  double clamped(int x, int y) const noexcept;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const GrayPlane&, const GrayPlane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const noexcept { return x + w; }    // exclusive
  int bottom() const noexcept { return y + h; }   // exclusive
  bool contains(const Rect& inner) const noexcept {
    return inner.x >= x && inner.y >= y && inner.right() <= right() && inner.bottom() <= bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

using ChannelPlanes = std::array<GrayPlane, 3>;

// Binary PPM (P6, maxval 255).
Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_ppm(const Image& img);
Image decode_ppm(std::span<const std::uint8_t> bytes);

/// True for file extensions load_image understands.
bool is_supported_image_path(const std::filesystem::path& path);

ChannelPlanes split_channels(const Image& img);
/// Inverse of split_channels. Samples are rounded and clamped to [0, 255].
Image merge_channels(const ChannelPlanes& planes);

Image crop(const Image& img, const Rect& r);

double plane_mean(const GrayPlane& p);

}  // namespace visrec
