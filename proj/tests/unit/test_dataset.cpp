#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <set>

#include "scenes.hpp"
#include "temp_dir.hpp"
#include "visrec/dataset.hpp"
#include "visrec/error.hpp"

using namespace visrec;
namespace vt = visrec::testing;
namespace fs = std::filesystem;

namespace {

FrameSource colour_frames(const vt::TempDir& dir, std::size_t n) {
  fs::create_directories(dir / "src");
  std::mt19937_64 rng(n);
  for (std::size_t i = 0; i < n; ++i) {
    Image img = vt::solid(6, 5, {static_cast<std::uint8_t>(i * 20), 90, 200});
    vt::add_gaussian_noise(img, 20.0, rng);
    save_image(img, dir / "src" / ("frame" + std::to_string(i) + ".ppm"));
  }
  return FrameSource::from_directory(dir / "src");
}

CaptureOptions fixed_time(std::size_t count = 5) {
  CaptureOptions o;
  o.count = count;
  o.when = std::chrono::system_clock::from_time_t(1718000000);
  o.use_fixed_time = true;
  return o;
}

std::set<std::string> files_in(const fs::path& dir) {
  std::set<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) out.insert(e.path().filename().string());
  return out;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no visrec::Error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(SanitizeLabel, Examples) {
  EXPECT_EQ(sanitize_label("mug"), "mug");
  EXPECT_EQ(sanitize_label("coffee mug/2"), "coffee_mug_2");
  EXPECT_EQ(sanitize_label("a-b_C9"), "a-b_C9");
  EXPECT_EQ(sanitize_label(""), "");
}

TEST(FormatTimestamp, Shape) {
  const auto stamp = format_timestamp(std::chrono::system_clock::from_time_t(1718000000));
  EXPECT_TRUE(std::regex_match(stamp, std::regex(R"(\d{8}_\d{6})"))) << stamp;
}

TEST(CaptureViews, FiveFramesFiveFiles) {
  vt::TempDir dir;
  const auto src = colour_frames(dir, 5);
  const auto m = capture_views(src, "mug", dir / "out");
  ASSERT_EQ(m.entries.size(), 5u);
  EXPECT_EQ(m.manifest_path, dir / "out" / kManifestFileName);
  const std::regex pattern(R"(IMG_mug_\d{8}_\d{6}_[0-4]\.(ppm|png|jpg))");
  auto names = files_in(dir / "out");
  EXPECT_EQ(names.erase(kManifestFileName), 1u);
  ASSERT_EQ(names.size(), 5u);
  for (const auto& n : names) EXPECT_TRUE(std::regex_match(n, pattern)) << n;

  const auto reread = read_manifest(m.manifest_path);
  ASSERT_EQ(reread.entries.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& e = reread.entries[i];
    EXPECT_EQ(e.label, "mug");
    EXPECT_EQ(e.frame_index, i);
    EXPECT_EQ(e.path, m.entries[i].path);
    // Every listed file re-loads bit-exactly.
    EXPECT_EQ(load_image(dir / "out" / e.path), load_image(src.frames[i]));
  }
}

TEST(CaptureViews, SameSecondCapturesDoNotCollide) {
  vt::TempDir dir;
  const auto src = colour_frames(dir, 5);
  const auto a = capture_views(src, "mug", dir / "out", fixed_time());
  const auto b = capture_views(src, "mug", dir / "out", fixed_time());
  std::set<fs::path> paths;
  for (const auto& e : a.entries) paths.insert(e.path);
  for (const auto& e : b.entries) paths.insert(e.path);
  EXPECT_EQ(paths.size(), 10u);
  EXPECT_EQ(files_in(dir / "out").size(), 11u);

  const auto all = read_manifest(a.manifest_path);
  ASSERT_EQ(all.entries.size(), 10u);
  std::ifstream in(a.manifest_path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, kManifestHeader);
  int headers = 0;
  for (std::string line; std::getline(in, line);) headers += line == kManifestHeader;
  EXPECT_EQ(headers, 0);
}

TEST(CaptureViews, StrideAndLabelColumn) {
  vt::TempDir dir;
  const auto src = colour_frames(dir, 9);
  CaptureOptions o = fixed_time(3);
  o.stride = 4;
  const auto m = capture_views(src, "coffee mug", dir / "out", o);
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[2].frame_index, 8u);
  EXPECT_EQ(m.entries[0].label, "coffee mug");
  EXPECT_EQ(m.entries[0].path.string().rfind("IMG_coffee_mug_", 0), 0u);
  EXPECT_EQ(read_manifest(m.manifest_path).entries[1].label, "coffee mug");
}

TEST(CaptureViews, ErrorsWriteNothing) {
  vt::TempDir dir;
  EXPECT_EQ(code_of([&] { capture_views(FrameSource{}, "mug", dir / "out"); }), Errc::empty_input);
  EXPECT_TRUE(files_in(dir / "out").empty());

  const auto src = colour_frames(dir, 3);
  EXPECT_EQ(code_of([&] { capture_views(src, "", dir / "out"); }), Errc::invalid_argument);
  EXPECT_TRUE(files_in(dir / "out").empty());

  { std::ofstream(dir / "plain") << "not a directory"; }
  EXPECT_EQ(code_of([&] { capture_views(src, "mug", dir / "plain" / "out"); }), Errc::unwritable_path);
}

TEST(CaptureViews, ManifestFailureRollsBackImages) {
  vt::TempDir dir;
  const auto src = colour_frames(dir, 4);
  fs::create_directories(dir / "out" / kManifestFileName);  // a directory where the manifest belongs
  EXPECT_EQ(code_of([&] { capture_views(src, "mug", dir / "out", fixed_time()); }), Errc::unwritable_path);
  EXPECT_EQ(files_in(dir / "out"), std::set<std::string>{kManifestFileName});
}

TEST(ReadManifest, Errors) {
  vt::TempDir dir;
  EXPECT_EQ(code_of([&] { read_manifest(dir / "none.tsv"); }), Errc::file_not_found);
  { std::ofstream(dir / "bad.tsv") << "wrong header\n"; }
  EXPECT_EQ(code_of([&] { read_manifest(dir / "bad.tsv"); }), Errc::malformed_header);
  { std::ofstream(dir / "row.tsv") << kManifestHeader << "\nonly\ttwo\n"; }
  EXPECT_EQ(code_of([&] { read_manifest(dir / "row.tsv"); }), Errc::malformed_header);
}
