#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "visrec/contours.hpp"
#include "visrec/image.hpp"

namespace visrec {

/// Normalized 1-D Gaussian taps; applied separably.
struct GaussianKernel {
  int size = 1;
  double sigma = 0.0;
  std::vector<double> weights;
};

/// sigma = 0.3 * ((size - 1) * 0.5 - 1) + 0.8. Size must be odd and positive.
GaussianKernel make_gaussian_kernel(int size);

/// Horizontal then vertical pass, edge-replicate borders.
GrayPlane gaussian_blur(const GrayPlane& p, const GaussianKernel& k);

/// Sobel gradient magnitude sqrt(gx^2 + gy^2), edge-replicate borders.
GrayPlane sobel_edges(const GrayPlane& p);

/// Pixel-wise maximum of the three channel edge maps.
GrayPlane combine_channel_edges(const GrayPlane& r, const GrayPlane& g, const GrayPlane& b);

/// Zeroes every sample strictly below the plane mean.
GrayPlane suppress_below_mean(const GrayPlane& p);

GrayPlane binarize(const GrayPlane& p);

enum class OutputMode { crop, mask };

struct SegmentationConfig {
  int blur_kernel_size = 3;
  double min_area_fraction = 0.05;
  OutputMode output_mode = OutputMode::crop;

  /// Throws invalid_argument when a field is out of range.
  void validate() const;
};

/// Reads blur_kernel_size, min_area_fraction and output_mode from key/value
/// pairs; other keys are ignored.
SegmentationConfig segmentation_config_from(const std::map<std::string, std::string>& values,
                                            SegmentationConfig base = {});
SegmentationConfig load_segmentation_config(const std::filesystem::path& path);

/// Parses "key = value" lines. Blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

OutputMode parse_output_mode(const std::string& text);
std::string to_string(OutputMode mode);

struct SegmentationResult {
  Image image;
  Rect rect;
  Contour contour;
};

/// Full pipeline: blur -> per-channel Sobel -> max -> mean suppression ->
/// binarize -> contours -> area filter -> largest. Throws no_object_found when
/// nothing survives filtering.
SegmentationResult segment(const Image& img, const SegmentationConfig& cfg = {});

/// The binary edge map segment() traces contours on.
GrayPlane edge_mask(const Image& img, const SegmentationConfig& cfg = {});

}  // namespace visrec
