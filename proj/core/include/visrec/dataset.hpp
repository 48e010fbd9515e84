#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "visrec/discovery.hpp"

namespace visrec {

struct ManifestEntry {
  std::filesystem::path path;   // relative to the manifest's directory
  std::string label;
  std::size_t frame_index = 0;
  std::string timestamp;        // yyyyMMdd_HHmmss, local time
};

struct CaptureManifest {
  std::filesystem::path manifest_path;
  std::vector<ManifestEntry> entries;
};

inline constexpr const char* kManifestFileName = "manifest.tsv";
inline constexpr const char* kManifestHeader = "path\tlabel\tframe_index\ttimestamp";

/// Replaces every character outside [A-Za-z0-9_-] with '_'.
std::string sanitize_label(const std::string& label);

/// yyyyMMdd_HHmmss in local time.
std::string format_timestamp(std::chrono::system_clock::time_point when);

struct CaptureOptions {
  std::size_t count = 5;
  std::size_t stride = 1;
  /// Fixed capture time; the current time is used when unset.
  std::chrono::system_clock::time_point when{};
  bool use_fixed_time = false;
};

/// Writes the extracted frames as IMG_<label>_<timestamp>_<n>.ppm into
/// `out_dir`, where n is the lowest sequence number not yet taken for that
/// label and timestamp, and appends one row per file to manifest.tsv. On
/// failure, files written by this call are removed and the manifest is untouched.
/// Returns the rows added by this call.
CaptureManifest capture_views(const FrameSource& src, const std::string& label,
                              const std::filesystem::path& out_dir, const CaptureOptions& options = {});

/// Reads every row of a manifest written by capture_views.
CaptureManifest read_manifest(const std::filesystem::path& manifest_path);

}  // namespace visrec
