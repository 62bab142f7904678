#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bvlab/curves.hpp"

using namespace bvlab;

namespace {

PolylineCurve l_shape() { return {{{0, 0}, {1, 0}, {1, 1}}, false, {}}; }

double polygon_oracle(std::size_t n) { return 2.0 * n * std::sin(kPi / n); }

}  // namespace

TEST(Length, LShape) { EXPECT_DOUBLE_EQ(length(l_shape()), 2.0); }

TEST(Length, SinglePoint) { EXPECT_DOUBLE_EQ(length(PolylineCurve{{{3, 4}}, false, {}}), 0.0); }

TEST(Length, InscribedPolygonsIncreaseToCircumference) {
  double prev = 0.0;
  for (std::size_t n : {3u, 6u, 12u, 96u, 4096u}) {
    const double L = length(circle_curve({0, 0}, 1.0, n));
    EXPECT_NEAR(L, polygon_oracle(n), 1e-12);
    EXPECT_GT(L, prev);
    EXPECT_LT(L, 2.0 * kPi);
    prev = L;
  }
  EXPECT_NEAR(prev, 2.0 * kPi, 1e-5);
}

TEST(Length, InvariantUnderReversalAndCollinearRefinement) {
  const PolylineCurve c = l_shape();
  EXPECT_DOUBLE_EQ(length(c.reversed()), length(c));
  const PolylineCurve refined{{{0, 0}, {0.25, 0}, {0.5, 0}, {1, 0}, {1, 0.3}, {1, 1}}, false, {}};
  EXPECT_NEAR(length(refined), length(c), 1e-15);
}

TEST(PartitionSum, MonotoneUnderRefinementAndBoundedByLength) {
  const PolylineCurve c = circle_curve({0, 0}, 1.0, 50);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(c.t_begin(), c.t_end());
  std::vector<double> part{c.t_begin(), c.t_end()};
  double prev = partition_sum(c, part);
  for (int step = 0; step < 200; ++step) {
    part.push_back(U(rng));
    std::sort(part.begin(), part.end());
    const double s = partition_sum(c, part);
    EXPECT_GE(s, prev - 1e-12);
    EXPECT_LE(s, length(c) + 1e-12);
    prev = s;
  }
  std::vector<double> vertices;
  for (std::size_t k = 0; k < c.points.size(); ++k) vertices.push_back(c.time_at(k));
  EXPECT_NEAR(partition_sum(c, vertices), length(c), 1e-12);
}

TEST(ArclengthReparam, UnitSegment) {
  const auto r = arclength_reparam(segment_curve({0, 0}, {1, 0}), 3);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_DOUBLE_EQ(r.points[1].x, 0.5);
  EXPECT_DOUBLE_EQ(r.points[2].x, 1.0);
}

TEST(ArclengthReparam, CircleQuarters) {
  const auto r = arclength_reparam(circle_curve({0, 0}, 1.0, 4096), 4);
  ASSERT_EQ(r.points.size(), 5u);
  for (std::size_t k = 0; k < 4; ++k) {
    const Point expect = polar_point(1.0, kPi * 0.5 * static_cast<double>(k));
    EXPECT_NEAR(distance(r.points[k], expect), 0.0, 1e-6);
  }
}

TEST(ArclengthReparam, LShapeCumulativeTable) {
  const auto r = arclength_reparam(l_shape(), 5);
  const Point expect[5] = {{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5}, {1, 1}};
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(distance(r.points[k], expect[k]), 0.0, 1e-14);
    EXPECT_NEAR(r.times[k], 0.5 * static_cast<double>(k), 1e-14);
  }
}

TEST(ArclengthReparam, PreservesLengthInTheLimit) {
  const auto c = ellipse_curve({0, 0}, 2.0, 1.0, 2000);
  double prev_err = 1.0;
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    const double err = std::abs(length(arclength_reparam(c, n)) - length(c)) / length(c);
    EXPECT_LE(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-5);
}

TEST(ArclengthReparam, ZeroLengthIsDegenerate) {
  try {
    arclength_reparam(PolylineCurve{{{1, 1}, {1, 1}}, false, {}}, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateCurve);
  }
}

TEST(MetricSpeed, UnitSpeedSegment) {
  const PolylineCurve c{{{0, 0}, {1, 0}}, false, {0.0, 1.0}};
  for (double t : {0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(metric_speed(c, t), 1.0);
}

TEST(MetricSpeed, HalfTimeDoublesSpeed) {
  const PolylineCurve c{{{0, 0}, {1, 0}}, false, {0.0, 0.5}};
  EXPECT_DOUBLE_EQ(metric_speed(c, 0.25), 2.0);
}

TEST(MetricSpeed, ReparamHasUnitSpeed) {
  const auto r = arclength_reparam(l_shape(), 7);
  for (double t : {0.1, 0.4, 1.2, 1.9}) EXPECT_NEAR(metric_speed(r, t), 1.0, 1e-12);
}

TEST(MetricSpeed, UndefinedAtVertex) {
  try {
    metric_speed(l_shape(), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedAtVertex);
  }
}

TEST(Simplicity, DetectsCrossings) {
  EXPECT_TRUE(is_simple(circle_curve({0, 0}, 1.0, 64)));
  EXPECT_TRUE(is_simple(l_shape()));
  const PolylineCurve bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 0}}, true, {}};
  EXPECT_FALSE(is_simple(bowtie));
  const PolylineCurve fold{{{0, 0}, {1, 0}, {0.5, 0}}, false, {}};
  EXPECT_FALSE(is_simple(fold));
}

TEST(Validate, ClosedMustRepeat) {
  const PolylineCurve bad{{{0, 0}, {1, 0}, {1, 1}}, true, {}};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(HausdorffDistance, ConcentricCircles) {
  const auto a = circle_curve({0, 0}, 1.0, 2048), b = circle_curve({0, 0}, 1.2, 2048);
  EXPECT_NEAR(hausdorff_distance({a}, {b}, 1e-3), 0.2, 1e-5);
}
