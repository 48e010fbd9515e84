#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "visrec/classifier.hpp"
#include "visrec/image.hpp"

namespace visrec {

/// Ordered still frames standing in for a video scan.
struct FrameSource {
  std::vector<std::filesystem::path> frames;
  double nominal_interval = 1.0;  // seconds between consecutive frames

  /// Loadable images in `dir`, in lexicographic filename order.
  static FrameSource from_directory(const std::filesystem::path& dir, double nominal_interval = 1.0);
};

struct ExtractedFrame {
  std::size_t source_index = 0;
  Image image;
};

/// Frames 0, stride, 2*stride, ... up to `count` of them; shorter when the
/// source runs out. Throws empty_input for an empty source.
std::vector<ExtractedFrame> extract_frames(const FrameSource& src, std::size_t count = 5,
                                           std::size_t stride = 1);

struct DiscoveryResult {
  bool found = false;
  std::size_t frame_index = 0;
  std::size_t class_index = 0;
  double score = 0.0;
};

struct DiscoveryOptions {
  std::size_t k = 5;
  bool case_insensitive = false;
};

/// Searches the top-k labels of each frame for `query` as a substring; the
/// first (highest ranked) matching label counts for that frame. Returns the
/// frame where that label's confidence is highest; earlier frames win ties.
DiscoveryResult discover(const Classifier& clf, const std::vector<Image>& frames,
                         const std::string& query, const DiscoveryOptions& options = {});

/// The k classes with the highest per-class maximum confidence over all frames.
std::vector<Prediction> scan_top_objects(const Classifier& clf, const std::vector<Image>& frames,
                                         std::size_t k = 5);

}  // namespace visrec
