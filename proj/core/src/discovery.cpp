#include "visrec/discovery.hpp"

#include <algorithm>
#include <cctype>

#include "visrec/error.hpp"

namespace visrec {

namespace {

bool contains(const std::string& haystack, const std::string& needle, bool case_insensitive) {
  if (!case_insensitive) return haystack.find(needle) != std::string::npos;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
  };
  return lower(haystack).find(lower(needle)) != std::string::npos;
}

}  // namespace

FrameSource FrameSource::from_directory(const std::filesystem::path& dir, double nominal_interval) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(Errc::file_not_found, "frame directory not found: " + dir.string());
  }
  FrameSource src;
  src.nominal_interval = nominal_interval;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_supported_image_path(entry.path())) {
      src.frames.push_back(entry.path());
    }
  }
  std::sort(src.frames.begin(), src.frames.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return src;
}

std::vector<ExtractedFrame> extract_frames(const FrameSource& src, std::size_t count, std::size_t stride) {
  if (count < 1 || stride < 1) {
    throw Error(Errc::invalid_argument, "frame count and stride must be at least 1");
  }
  if (src.frames.empty()) throw Error(Errc::empty_input, "frame source is empty");
  std::vector<ExtractedFrame> out;
  for (std::size_t i = 0; i < src.frames.size() && out.size() < count; i += stride) {
    out.push_back({i, load_image(src.frames[i])});
  }
  return out;
}

DiscoveryResult discover(const Classifier& clf, const std::vector<Image>& frames,
                         const std::string& query, const DiscoveryOptions& options) {
  if (query.empty()) throw Error(Errc::invalid_argument, "discovery query is empty");
  if (options.k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  const std::size_t k = std::min(options.k, clf.labels().size());

  DiscoveryResult best;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto scores = clf.confidence_scores(frames[f]);
    for (const auto& p : top_k(scores, k)) {
      if (!contains(clf.labels()[p.class_index], query, options.case_insensitive)) continue;
      if (!best.found || best.score < p.score) {
        best = {true, f, p.class_index, p.score};
      }
      break;
    }
  }
  return best;
}

std::vector<Prediction> scan_top_objects(const Classifier& clf, const std::vector<Image>& frames,
                                         std::size_t k) {
  if (frames.empty()) throw Error(Errc::empty_input, "no frames to scan");
  ConfidenceVector peak;
  for (const auto& frame : frames) {
    const auto scores = clf.confidence_scores(frame);
    if (peak.scores.empty()) {
      peak = scores;
    } else {
      for (std::size_t i = 0; i < scores.size(); ++i) {
        peak.scores[i] = std::max(peak.scores[i], scores.scores[i]);
      }
    }
  }
  return top_k(peak, k);
}

}  // namespace visrec
