#include <gtest/gtest.h>

#include <cstdlib>
#include <optional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "scenes.hpp"
#include "visrec/contours.hpp"
#include "visrec/error.hpp"

using namespace visrec;

namespace {

GrayPlane plane_from(const std::vector<std::string>& rows) {
  GrayPlane p(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x) p.at(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#' ? 1.0 : 0.0;
  return p;
}

Contour contour_with_area(std::size_t area, std::optional<std::size_t> parent = std::nullopt) {
  Contour c;
  c.points = {{0, 0}};
  c.area = area;
  c.parent = parent;
  return c;
}

}  // namespace

TEST(FindContours, SolidBlock) {
  GrayPlane p(7, 7, 0.0);
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 3; ++x) p.at(x, y) = 1.0;
  const auto cs = find_contours(p);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].area, 9u);
  EXPECT_FALSE(cs[0].parent);
  EXPECT_EQ(cs[0].bounding_rect(), (Rect{1, 1, 3, 3}));
  EXPECT_EQ(cs[0].points.size(), 8u);
}

TEST(FindContours, EmptyAndAllZero) {
  EXPECT_TRUE(find_contours(GrayPlane(6, 4, 0.0)).empty());
  EXPECT_TRUE(find_contours(GrayPlane()).empty());
}

TEST(FindContours, SinglePixel) {
  GrayPlane p(3, 3, 0.0);
  p.at(1, 1) = 1.0;
  const auto cs = find_contours(p);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].area, 1u);
  EXPECT_EQ(cs[0].points, (std::vector<Point>{{1, 1}}));
}

TEST(FindContours, FullPlaneTouchesEdges) {
  const auto cs = find_contours(GrayPlane(7, 4, 1.0));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].area, 28u);
  EXPECT_EQ(cs[0].bounding_rect(), (Rect{0, 0, 7, 4}));
}

TEST(FindContours, RingWithInnerBlock) {
  const auto p = plane_from({
      "...........",
      ".#########.",
      ".#.......#.",
      ".#.......#.",
      ".#..###..#.",
      ".#..###..#.",
      ".#..###..#.",
      ".#.......#.",
      ".#.......#.",
      ".#########.",
      "...........",
  });
  const auto cs = find_contours(p);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_FALSE(cs[0].parent);
  EXPECT_EQ(cs[0].area, 81u);
  ASSERT_TRUE(cs[1].parent);
  EXPECT_EQ(*cs[1].parent, 0u);
  EXPECT_EQ(cs[1].area, 9u);
}

TEST(FindContours, DiagonalPixelsAreOneComponent) {
  const auto cs = find_contours(plane_from({"#..", ".#.", "..#"}));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].area, 3u);
}

TEST(FindContours, RejectsNonBinary) {
  GrayPlane p(3, 3, 0.0);
  p.at(1, 1) = 0.5;
  try {
    find_contours(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_binary_input);
  }
}

// Random planes against the brute-force component/enclosure oracle.
TEST(FindContours, MatchesNestingOracle) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int trial = 0; trial < 400; ++trial) {
    const int w = dim(rng), h = dim(rng);
    const auto p = visrec::testing::random_binary(rng, w, h, density(rng));
    const auto cs = find_contours(p);
    const auto oracle = visrec::testing::nesting_oracle(p);
    ASSERT_EQ(cs.size(), oracle.size()) << "trial " << trial;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      ASSERT_EQ(cs[i].area, oracle[i].enclosed) << "trial " << trial << " contour " << i;
      ASSERT_EQ(cs[i].parent, oracle[i].parent) << "trial " << trial << " contour " << i;
      ASSERT_EQ(cs[i].points.front(), oracle[i].pixels.front());
    }
  }
}

TEST(FindContours, BorderIsClosedWalkOverComponent) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = visrec::testing::random_binary(rng, 12, 9, 0.5);
    for (const auto& c : find_contours(p)) {
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        const auto& a = c.points[i];
        const auto& b = c.points[(i + 1) % c.points.size()];
        ASSERT_EQ(p.at(a.x, a.y), 1.0);
        if (c.points.size() > 1) {
          ASSERT_LE(std::abs(a.x - b.x), 1);
          ASSERT_LE(std::abs(a.y - b.y), 1);
          ASSERT_FALSE(a == b);
        }
      }
    }
  }
}

TEST(FindContours, ParentStrictlyLargerAndEnclosing) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = visrec::testing::random_binary(rng, 14, 14, 0.55);
    const auto cs = find_contours(p);
    for (const auto& c : cs) {
      if (!c.parent) continue;
      const auto& parent = cs[*c.parent];
      ASSERT_GT(parent.area, c.area);
      const Rect pr = parent.bounding_rect(), cr = c.bounding_rect();
      ASSERT_TRUE(pr.x < cr.x && pr.y < cr.y && pr.right() > cr.right() && pr.bottom() > cr.bottom());
    }
  }
}

TEST(FindContours, TranslationInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto small = visrec::testing::random_binary(rng, 10, 8, 0.5);
    GrayPlane shifted(16, 13, 0.0);
    const int dx = 1 + trial % 5, dy = 1 + trial % 4;
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 10; ++x) shifted.at(x + dx, y + dy) = small.at(x, y);
    const auto a = find_contours(small), b = find_contours(shifted);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].area, b[i].area);
      EXPECT_EQ(a[i].parent, b[i].parent);
      const Rect ra = a[i].bounding_rect(), rb = b[i].bounding_rect();
      EXPECT_EQ(ra.x + dx, rb.x);
      EXPECT_EQ(ra.y + dy, rb.y);
    }
  }
}

TEST(FilterContours, ThresholdAndParentRemap) {
  const std::vector<Contour> cs = {contour_with_area(5000), contour_with_area(499, 0u),
                                   contour_with_area(600, 0u), contour_with_area(100, 2u),
                                   contour_with_area(500, 1u)};
  const auto kept = filter_contours(cs, 10000, 0.05);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0].area, 5000u);
  EXPECT_EQ(kept[1].area, 600u);
  EXPECT_EQ(kept[1].parent, std::optional<std::size_t>(0));
  EXPECT_EQ(kept[2].area, 500u);
  EXPECT_FALSE(kept[2].parent);

  EXPECT_EQ(filter_contours(cs, 10000, 0.0).size(), cs.size());
  EXPECT_TRUE(filter_contours(cs, 10000, 0.9).empty());
  EXPECT_TRUE(filter_contours({}, 100, 0.05).empty());
}

TEST(FilterContours, IsIdempotentSubsequence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cs = find_contours(visrec::testing::random_binary(rng, 16, 16, 0.5));
    const auto once = filter_contours(cs, 256, 0.02);
    const auto twice = filter_contours(once, 256, 0.02);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      ASSERT_GE(static_cast<double>(once[i].area), 0.02 * 256);
      ASSERT_EQ(once[i].points, twice[i].points);
      ASSERT_EQ(once[i].parent, twice[i].parent);
    }
  }
}

TEST(LargestContour, FirstMaximumWins) {
  const std::vector<Contour> cs = {contour_with_area(3), contour_with_area(9), contour_with_area(9)};
  EXPECT_EQ(largest_contour_index(cs), 1u);
  EXPECT_EQ(&largest_contour(cs), &cs[1]);
  try {
    largest_contour({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_object_found);
  }
}

TEST(FilterContours, SmallAndLargeOnHundredSquare) {
  const auto kept = filter_contours({contour_with_area(4), contour_with_area(400)}, 100 * 100, 0.03);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].area, 400u);
}

TEST(LargestContour, MatchesMaxScan) {
  EXPECT_EQ(largest_contour_index({contour_with_area(10), contour_with_area(50), contour_with_area(50)}), 1u);
  EXPECT_EQ(largest_contour_index({contour_with_area(10)}), 0u);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> area(0, 20), len(1, 30);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Contour> cs(len(rng));
    for (auto& c : cs) c = contour_with_area(area(rng));
    std::size_t best = 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i].area > cs[best].area) best = i;
    ASSERT_EQ(largest_contour_index(cs), best);
  }
}
