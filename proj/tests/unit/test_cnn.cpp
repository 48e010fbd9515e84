#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "visrec/cnn.hpp"
#include "visrec/error.hpp"

using namespace visrec;

namespace {

Volume random_volume(std::mt19937_64& rng, int d, int h, int w) {
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  Volume out(d, h, w);
  for (auto& x : out.data()) x = v(rng);
  return out;
}

ConvFilters random_filters(std::mt19937_64& rng, const ConvSpec& spec, int depth, bool with_bias) {
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  ConvFilters f{spec, depth, {}, {}};
  f.weights.resize(static_cast<std::size_t>(spec.num_filters * depth * spec.filter_size * spec.filter_size));
  for (auto& x : f.weights) x = v(rng);
  if (with_bias) {
    f.bias.resize(static_cast<std::size_t>(spec.num_filters));
    for (auto& x : f.bias) x = v(rng);
  }
  return f;
}

}  // namespace

TEST(ConvShape, Examples) {
  EXPECT_EQ(conv_output_shape(227, {11, 4, 0, 96}), 55);
  EXPECT_EQ(conv_output_shape(5, {5, 1, 0, 1}), 1);
  EXPECT_EQ(conv_output_shape(55, {3, 2, 0, 1}), 27);
  EXPECT_EQ(conv_output_shape(5, {3, 1, 1, 1}), 5);
  EXPECT_THROW(conv_output_shape(4, {5, 1, 0, 1}), Error);
  EXPECT_THROW(conv_output_shape(10, {3, 0, 0, 1}), Error);
  EXPECT_THROW(conv_output_shape(10, {3, 1, -1, 1}), Error);
}

TEST(PoolShape, Examples) {
  EXPECT_EQ(pool_output_shape(55, {3, 2}), 27);
  EXPECT_EQ(pool_output_shape(5, {3, 2}), 2);
  EXPECT_THROW(pool_output_shape(2, {3, 2}), Error);
  EXPECT_TRUE((PoolSpec{3, 2}.overlapping()));
  EXPECT_FALSE((PoolSpec{2, 2}.overlapping()));
}

TEST(ConvForward, FirstStageShapeChain) {
  const Volume input(3, 227, 227, 0.5);
  ConvFilters filters{{11, 4, 0, 96}, 3, std::vector<double>(96 * 3 * 11 * 11, 0.001), {}};
  const Volume conv = conv_forward(input, filters, 4);
  EXPECT_EQ(conv.depth(), 96);
  EXPECT_EQ(conv.height(), 55);
  EXPECT_EQ(conv.width(), 55);
  const Volume pooled = max_pool(relu(conv), {3, 2});
  EXPECT_EQ(pooled.depth(), 96);
  EXPECT_EQ(pooled.height(), 27);
  EXPECT_EQ(pooled.width(), 27);
}

TEST(ConvForward, UnitFilterIsIdentity) {
  std::mt19937_64 rng(1);
  const auto input = random_volume(rng, 1, 6, 4);
  const ConvFilters f{{1, 1, 0, 1}, 1, {1.0}, {}};
  EXPECT_EQ(conv_forward(input, f), input);
}

TEST(ConvForward, OnesOverOnes) {
  const Volume input(1, 5, 5, 1.0);
  const ConvFilters f{{3, 1, 0, 1}, 1, std::vector<double>(9, 1.0), {}};
  EXPECT_EQ(conv_forward(input, f), Volume(1, 3, 3, 9.0));
}

TEST(ConvForward, ShapeMismatch) {
  const Volume input(2, 5, 5, 1.0);
  const ConvFilters wrong_depth{{3, 1, 0, 1}, 1, std::vector<double>(9, 1.0), {}};
  EXPECT_THROW(conv_forward(input, wrong_depth), Error);
  const ConvFilters short_weights{{3, 1, 0, 1}, 2, std::vector<double>(9, 1.0), {}};
  EXPECT_THROW(conv_forward(input, short_weights), Error);
  const ConvFilters bad_bias{{3, 1, 0, 2}, 2, std::vector<double>(36, 1.0), {1.0}};
  EXPECT_THROW(conv_forward(input, bad_bias), Error);
}

TEST(ConvForward, MatchesNaiveOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 8), depth(1, 3), fsize(1, 4), stride(1, 3), pad(0, 2), k(1, 4);
  int checked = 0;
  while (checked < 250) {
    const int d = depth(rng), h = dim(rng), w = dim(rng);
    const ConvSpec spec{fsize(rng), stride(rng), pad(rng), k(rng)};
    if (h + 2 * spec.pad < spec.filter_size || w + 2 * spec.pad < spec.filter_size) continue;
    const auto input = random_volume(rng, d, h, w);
    const auto filters = random_filters(rng, spec, d, checked % 2 == 0);
    const auto expected = visrec::testing::naive_conv(input, filters);
    const auto got = conv_forward(input, filters, 1 + checked % 4);
    ASSERT_EQ(got.depth(), expected.depth());
    ASSERT_EQ(got.height(), expected.height());
    ASSERT_EQ(got.width(), expected.width());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got.data()[i], expected.data()[i], 1e-12);
    ++checked;
  }
}

TEST(ConvForward, WorkerCountDoesNotChangeBits) {
  std::mt19937_64 rng(8);
  const auto input = random_volume(rng, 3, 16, 16);
  const auto filters = random_filters(rng, {3, 1, 1, 7}, 3, true);
  const auto one = conv_forward(input, filters, 1);
  EXPECT_EQ(conv_forward(input, filters, 2), one);
  EXPECT_EQ(conv_forward(input, filters, 4), one);
  EXPECT_EQ(conv_forward(input, filters, 16), one);
}

TEST(MaxPool, OneToTwentyFive) {
  Volume p(1, 5, 5);
  for (int i = 0; i < 25; ++i) p.data()[static_cast<std::size_t>(i)] = i + 1;
  EXPECT_EQ(max_pool(p, {3, 2}), Volume(1, 2, 2, std::vector<double>{13, 15, 23, 25}));
}

TEST(MaxPool, IdentityAndConstant) {
  std::mt19937_64 rng(3);
  const auto v = random_volume(rng, 2, 5, 7);
  EXPECT_EQ(max_pool(v, {1, 1}), v);
  EXPECT_EQ(max_pool(Volume(3, 7, 7, 4.0), {3, 2}), Volume(3, 3, 3, 4.0));
  EXPECT_THROW(max_pool(Volume(1, 2, 2), {3, 2}), Error);
}

TEST(MaxPool, MatchesNaiveOracle) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 8), depth(1, 3), window(1, 4), stride(1, 3);
  int checked = 0;
  while (checked < 250) {
    const int d = depth(rng), h = dim(rng), w = dim(rng);
    const PoolSpec spec{window(rng), stride(rng)};
    if (h < spec.window || w < spec.window) continue;
    const auto input = random_volume(rng, d, h, w);
    ASSERT_EQ(max_pool(input, spec), visrec::testing::naive_pool(input, spec));
    ++checked;
  }
}

TEST(Relu, Examples) {
  EXPECT_EQ(relu(-3.0), 0.0);
  EXPECT_EQ(relu(5.0), 5.0);
  EXPECT_EQ(relu(std::vector<double>{-1, 0, 2}), (std::vector<double>{0, 0, 2}));
  std::mt19937_64 rng(4);
  const auto v = random_volume(rng, 2, 4, 4);
  const auto once = relu(v);
  EXPECT_EQ(relu(once), once);
  for (double x : once.data()) EXPECT_GE(x, 0.0);
}

TEST(FullyConnected, Example) {
  const std::vector<double> in{1, 2, 3};
  const std::vector<double> w{1, 0, -1, 0.5, 0.5, 0.5};
  const std::vector<double> b{10, 0};
  EXPECT_EQ(fully_connected(in, w, b), (std::vector<double>{8, 3}));
  EXPECT_THROW(fully_connected(in, std::vector<double>(5, 1.0), b), Error);
}

TEST(SpecValidation, Invariants) {
  EXPECT_NO_THROW((ConvSpec{11, 4, 0, 96}.validate()));
  EXPECT_THROW((ConvSpec{0, 1, 0, 1}.validate()), Error);
  EXPECT_THROW((ConvSpec{1, 1, 0, 0}.validate()), Error);
  EXPECT_THROW((PoolSpec{0, 1}.validate()), Error);
  EXPECT_THROW((PoolSpec{2, 0}.validate()), Error);
}
