#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "sigmil/imaging.hpp"

using namespace sigmil;

TEST(ToGray, BlackAndWhite) {
  std::vector<std::uint8_t> black(3 * 6, 0), white(3 * 6, 255);
  const auto g0 = to_gray(black, 3, 2);
  const auto g1 = to_gray(white, 3, 2);
  for (const double v : g0.pixels()) EXPECT_EQ(v, 0.0);
  for (const double v : g1.pixels()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(ToGray, PureRedUsesLumaWeight) {
  const std::vector<std::uint8_t> red{255, 0, 0};
  EXPECT_NEAR(to_gray(red, 1, 1).at(0, 0), 0.299, 1e-15);
}

TEST(ToGray, RejectsZeroSizeAndShortBuffers) {
  EXPECT_THROW(to_gray({}, 0, 4), DimensionError);
  const std::vector<std::uint8_t> rgb(5, 0);
  EXPECT_THROW(to_gray(rgb, 2, 1), DimensionError);
}

TEST(IntegralImage, ZeroFrame) {
  const auto ii = build_integral(GrayFrame(5, 4, 0.0));
  for (int y = 0; y <= 4; ++y)
    for (int x = 0; x <= 5; ++x) EXPECT_EQ(ii.cumulative(x, y), 0.0);
  EXPECT_EQ(rect_sum(ii, {1, 1, 3, 2}), 0.0);
}

TEST(IntegralImage, SmallKnownSums) {
  EXPECT_EQ(build_integral(GrayFrame(2, 2, 1.0)).cumulative(2, 2), 4.0);
  EXPECT_EQ(build_integral(GrayFrame(1, 1, 0.5)).cumulative(1, 1), 0.5);
  EXPECT_EQ(rect_sum(build_integral(GrayFrame(3, 3, 1.0)), {0, 0, 3, 3}), 9.0);
}

TEST(IntegralImage, BorderIsZero) {
  const auto ii = build_integral(GrayFrame(4, 3, 0.7));
  for (int x = 0; x <= 4; ++x) EXPECT_EQ(ii.cumulative(x, 0), 0.0);
  for (int y = 0; y <= 3; ++y) EXPECT_EQ(ii.cumulative(0, y), 0.0);
}

TEST(RectSum, SinglePixelIsIdentity) {
  GrayFrame f(4, 4, 0.0);
  f.set(2, 1, 0.375);
  EXPECT_EQ(rect_sum(build_integral(f), {2, 1, 1, 1}), 0.375);
}

TEST(RectSum, OutOfBoundsThrows) {
  const auto ii = build_integral(GrayFrame(4, 4, 0.5));
  EXPECT_THROW(rect_sum(ii, {3, 0, 2, 1}), BoundsError);
  EXPECT_THROW(rect_sum(ii, {-1, 0, 1, 1}), BoundsError);
  EXPECT_THROW(rect_sum(ii, {0, 0, 0, 1}), BoundsError);
}

TEST(RectSum, MatchesNaiveSumOnRandomFrames) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> side(1, 64);
  std::uniform_real_distribution<double> px(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = side(rng), h = side(rng);
    GrayFrame f(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) f.set(x, y, px(rng));
    const auto ii = build_integral(f);
    for (int k = 0; k < 50; ++k) {
      Rect r;
      r.x = std::uniform_int_distribution<int>(0, w - 1)(rng);
      r.y = std::uniform_int_distribution<int>(0, h - 1)(rng);
      r.w = std::uniform_int_distribution<int>(1, w - r.x)(rng);
      r.h = std::uniform_int_distribution<int>(1, h - r.y)(rng);
      EXPECT_NEAR(rect_sum(ii, r), oracle::naive_rect_sum(f, r), 1e-9);
    }
  }
}

TEST(RectSum, DyadicValuesAreExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 16);
  GrayFrame f(33, 17);
  for (int y = 0; y < 17; ++y)
    for (int x = 0; x < 33; ++x) f.set(x, y, level(rng) / 16.0);
  const auto ii = build_integral(f);
  EXPECT_EQ(rect_sum(ii, {3, 2, 25, 11}), oracle::naive_rect_sum(f, {3, 2, 25, 11}));
}

TEST(RectSum, AdditiveOverSplits) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> px(0.0, 1.0);
  GrayFrame f(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) f.set(x, y, px(rng));
  const auto ii = build_integral(f);
  const Rect whole{2, 3, 15, 12};
  for (int cut = 1; cut < whole.w; ++cut) {
    const Rect left{whole.x, whole.y, cut, whole.h}, right{whole.x + cut, whole.y, whole.w - cut, whole.h};
    EXPECT_NEAR(rect_sum(ii, whole), rect_sum(ii, left) + rect_sum(ii, right), 1e-12);
  }
  for (int cut = 1; cut < whole.h; ++cut) {
    const Rect top{whole.x, whole.y, whole.w, cut}, bottom{whole.x, whole.y + cut, whole.w, whole.h - cut};
    EXPECT_NEAR(rect_sum(ii, whole), rect_sum(ii, top) + rect_sum(ii, bottom), 1e-12);
  }
}

TEST(GrayFrame, ClampsAndValidates) {
  EXPECT_THROW(GrayFrame(0, 3), DimensionError);
  EXPECT_THROW(GrayFrame(2, 2, std::vector<double>(3, 0.0)), DimensionError);
  GrayFrame f(2, 2, std::vector<double>{-1.0, 0.5, 2.0, 1.0});
  EXPECT_EQ(f.at(0, 0), 0.0);
  EXPECT_EQ(f.at(0, 1), 1.0);
  EXPECT_THROW((void)f.crop({1, 1, 2, 1}), BoundsError);
}
