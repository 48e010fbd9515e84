#include "visrec/dataset.hpp"

#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "visrec/error.hpp"

namespace visrec {

namespace {

std::string manifest_safe(std::string text) {
  for (auto& ch : text) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

void remove_quietly(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) {
    std::error_code ec;
    std::filesystem::remove(f, ec);
  }
}

}  // namespace

std::string sanitize_label(const std::string& label) {
  std::string out = label;
  for (auto& ch : out) {
    const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
                    ch == '_' || ch == '-';
    if (!ok) ch = '_';
  }
  return out;
}

std::string format_timestamp(std::chrono::system_clock::time_point when) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm local{};
  localtime_r(&t, &local);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d_%H%M%S", &local);
  return buf;
}

CaptureManifest capture_views(const FrameSource& src, const std::string& label,
                              const std::filesystem::path& out_dir, const CaptureOptions& options) {
  const std::string safe = sanitize_label(label);
  if (safe.empty()) throw Error(Errc::invalid_argument, "label is empty");
  if (src.frames.empty()) throw Error(Errc::empty_input, "frame source is empty");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(Errc::unwritable_path, "cannot create output directory: " + out_dir.string());
  }

  const auto frames = extract_frames(src, options.count, options.stride);
  const std::string stamp =
      format_timestamp(options.use_fixed_time ? options.when : std::chrono::system_clock::now());

  CaptureManifest manifest;
  manifest.manifest_path = out_dir / kManifestFileName;
  std::vector<std::filesystem::path> written;
  std::size_t sequence = 0;
  try {
    for (const auto& frame : frames) {
      std::filesystem::path name;
      do {
        name = "IMG_" + safe + "_" + stamp + "_" + std::to_string(sequence++) + ".ppm";
      } while (std::filesystem::exists(out_dir / name));
      save_image(frame.image, out_dir / name);
      written.push_back(out_dir / name);
      manifest.entries.push_back({name, manifest_safe(label), frame.source_index, stamp});
    }

    const bool fresh = !std::filesystem::exists(manifest.manifest_path);
    std::ostringstream rows;
    if (fresh) rows << kManifestHeader << '\n';
    for (const auto& e : manifest.entries) {
      rows << e.path.string() << '\t' << e.label << '\t' << e.frame_index << '\t' << e.timestamp << '\n';
    }
    std::ofstream out(manifest.manifest_path, std::ios::app);
    if (!out) throw Error(Errc::unwritable_path, "cannot write " + manifest.manifest_path.string());
    out << rows.str();
    out.close();
    if (!out) throw Error(Errc::unwritable_path, "failed writing " + manifest.manifest_path.string());
  } catch (...) {
    remove_quietly(written);
    throw;
  }
  return manifest;
}

CaptureManifest read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(Errc::file_not_found, "cannot read manifest: " + manifest_path.string());
  CaptureManifest manifest;
  manifest.manifest_path = manifest_path;
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) {
    throw Error(Errc::malformed_header, "manifest header missing: " + manifest_path.string());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    ManifestEntry e;
    std::string path, index;
    if (!std::getline(row, path, '\t') || !std::getline(row, e.label, '\t') ||
        !std::getline(row, index, '\t') || !std::getline(row, e.timestamp)) {
      throw Error(Errc::malformed_header, "bad manifest row: " + line);
    }
    e.path = path;
    try {
      e.frame_index = std::stoul(index);
    } catch (const std::exception&) {
      throw Error(Errc::malformed_header, "bad frame index in manifest row: " + line);
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace visrec
