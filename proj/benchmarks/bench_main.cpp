#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "visrec/visrec.hpp"

using namespace visrec;

namespace {

// Flat background, one bright rectangle, mild noise.
Image rect_scene(int size) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 2.0);
  Image img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const bool inside = x >= size / 4 && x < size * 3 / 4 && y >= size / 3 && y < size * 2 / 3;
      const double base = inside ? 220.0 : 40.0;
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(base + noise(rng), 0.0, 255.0));
      }
    }
  }
  return img;
}

void BM_Segment(benchmark::State& state) {
  const auto img = rect_scene(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(segment(img));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.pixel_count()));
}
BENCHMARK(BM_Segment)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FindContours(benchmark::State& state) {
  const auto mask = edge_mask(rect_scene(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(find_contours(mask));
}
BENCHMARK(BM_FindContours)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_ConvForward(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Volume input(3, 63, 63);
  for (auto& v : input.data()) v = u(rng);
  ConvFilters f{{11, 4, 0, 96}, 3, std::vector<double>(96 * 3 * 11 * 11), std::vector<double>(96, 0.0)};
  for (auto& w : f.weights) w = u(rng);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conv_forward(input, f, workers));
}
BENCHMARK(BM_ConvForward)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Base64RoundTrip(benchmark::State& state) {
  const auto bytes = encode_ppm(rect_scene(512));
  for (auto _ : state) benchmark::DoNotOptimize(b64_decode(b64_encode(bytes)));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_Base64RoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
