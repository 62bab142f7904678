#include <gtest/gtest.h>

#include <cmath>

#include "bvlab/metric_bv.hpp"

using namespace bvlab;

namespace {

const Rect kUnit{0, 0, 1, 1};

MapField sampled(const Rect& win, std::size_t n, const PlaneMap& f) { return MapField::sample(Lattice::over(win, n), f); }

}  // namespace

TEST(ExactVariation, IdentityOnUnitSquare) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  EXPECT_NEAR(exact_variation(sampled(kUnit, 64, [](Point p) { return p; }), plane).value, 1.0, 1e-12);
}

TEST(ExactVariation, HorizontalStretch) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  EXPECT_NEAR(exact_variation(sampled(kUnit, 64, [](Point p) { return Point{2 * p.x, p.y}; }), plane).value, 2.0,
              1e-12);
}

TEST(ExactVariation, SquaringMapOnUnitDisk) {
  const auto plane = WeightedPlane::uniform(1.0, Rect{-1, -1, 1, 1});
  const auto f = builtin_homeo("radial_power");
  const double exact = 4.0 * kPi / 3.0;
  EXPECT_NEAR(exact_variation(f, plane, 512).value, exact, 0.02 * exact);
  EXPECT_NEAR(exact_variation(f, plane, 1024).value, exact, 0.01 * exact);
}

TEST(ExactVariation, ScalesWithDensity) {
  const auto f = builtin_homeo("swirl");
  const WeightedPlane plane(OscillatingDensity{}, Rect{-1, -1, 1, 1});
  const double a = exact_variation(f, plane, 128).value;
  EXPECT_NEAR(exact_variation(f, plane.rescaled(2.5), 128).value, 2.5 * a, 1e-10 * a);
}

TEST(ExactVariation, UndeclaredSingularityRaises) {
  HomeoSpec f = builtin_homeo("radial_twist");
  f.singular_points.clear();
  const auto plane = WeightedPlane::uniform(1.0, Rect{-1, -1, 1, 1});
  try {
    exact_variation(f, plane, Lattice::over(Rect{-1, -1, 1, 1}, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularityError);
  }
}

TEST(ExactVariation, DeclaredSingularityIsExcluded) {
  const auto f = builtin_homeo("radial_twist");
  const auto plane = WeightedPlane::uniform(1.0, Rect{-1, -1, 1, 1});
  const auto rep = exact_variation(f, plane, Lattice::over(Rect{-1, -1, 1, 1}, 3));
  EXPECT_EQ(rep.excluded_nodes, 1u);
}

TEST(ExactVariation, AnalyticAndSampledAgree) {
  const auto f = builtin_homeo("swirl");
  const Rect box{-0.7, -0.7, 0.7, 0.7};
  const auto plane = WeightedPlane::uniform(1.0, box);
  HomeoSpec boxed = f;
  boxed.source = Domain::box(box);
  const double analytic = exact_variation(boxed, plane, 256).value;
  const double sampled_v = exact_variation(sampled(box, 256, f.forward), plane).value;
  EXPECT_NEAR(sampled_v, analytic, 2e-3 * analytic);
}

TEST(DictionaryVariation, IdentityBoundedByOneAndApproachesIt) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const MapField id = sampled(kUnit, 64, [](Point p) { return p; });
  double prev = 0.0;
  for (std::size_t ring : {2u, 4u, 8u, 16u, 32u}) {
    const double v = dictionary_variation(id, plane, default_dictionary(kUnit, ring, ring)).value;
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
  EXPECT_NEAR(prev, 1.0, 0.01);
}

TEST(DictionaryVariation, ConstantMapIsZero) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const MapField c = sampled(kUnit, 32, [](Point) { return Point{0.3, 0.4}; });
  EXPECT_EQ(dictionary_variation(c, plane, default_dictionary(kUnit, 16, 8)).value, 0.0);
}

TEST(DictionaryVariation, StretchWithConeRing) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const MapField m = sampled(kUnit, 64, [](Point p) { return Point{2 * p.x, p.y}; });
  LipschitzDictionary cones = default_dictionary(Rect{0, 0, 2, 1}, 16, 0);
  const double v = dictionary_variation(m, plane, cones).value;
  EXPECT_NEAR(v, 2.0, 0.2);
  EXPECT_LE(v, exact_variation(m, plane).value + 1e-12);
}

TEST(DictionaryVariation, LowerBoundForLinearMaps) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const Mat2 A{1.3, -0.4, 0.7, 0.2};
  const MapField m = sampled(kUnit, 64, [A](Point p) { return A.apply(p); });
  const auto dict = default_dictionary(Rect{-2, -2, 2, 2}, 32, 32);
  EXPECT_LE(dictionary_variation(m, plane, dict).value, exact_variation(m, plane).value + 1e-12);
  EXPECT_NEAR(dictionary_variation(m, plane, dict).value, sigma_max(A), 0.01 * sigma_max(A));
}

TEST(DictionaryVariation, EmptyDictionaryRejected) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  try {
    dictionary_variation(sampled(kUnit, 8, [](Point p) { return p; }), plane, LipschitzDictionary{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(SliceVariation, IdentityColumns) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const auto r = slice_variation(sampled(kUnit, 128, [](Point p) { return p; }), plane, SliceAxis::X);
  EXPECT_NEAR(r.slice_integral, 1.0, 1.0 / 128 + 1e-12);
  EXPECT_NEAR(r.full_variation, 1.0, 1e-12);
  EXPECT_TRUE(r.holds());
}

TEST(SliceVariation, StretchVerticalSlicesHaveUnitSpeed) {
  const auto plane = WeightedPlane::uniform(1.0, kUnit);
  const auto r = slice_variation(sampled(kUnit, 128, [](Point p) { return Point{2 * p.x, p.y}; }), plane, SliceAxis::X);
  EXPECT_NEAR(r.slice_integral, 1.0, 1.0 / 128 + 1e-12);
  EXPECT_NEAR(r.full_variation, 2.0, 1e-12);
  EXPECT_TRUE(r.holds());
}

TEST(SliceVariation, SquaringMapBothAxes) {
  const auto f = builtin_homeo("radial_power");
  const Rect box{-0.7, -0.7, 0.7, 0.7};
  const auto plane = WeightedPlane::uniform(1.0, box);
  const Lattice lat = Lattice::over(box, 256);
  for (SliceAxis ax : {SliceAxis::X, SliceAxis::Y}) {
    const auto r = slice_variation(f, plane, lat, ax);
    EXPECT_TRUE(r.holds());
    // Oracle: along x = c the image moves with speed |(cy, c² + 2y²)|/r.
    double oracle = 0.0;
    const int n = 2000;
    for (std::size_t i = 0; i < lat.nx; ++i) {
      const double c = lat.node(i, 0).x;
      const double y0 = lat.node(0, 0).y, y1 = lat.node(0, lat.ny - 1).y;
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double y = y0 + (y1 - y0) * (k + 0.5) / n;
        s += std::hypot(c * y, c * c + 2 * y * y) / std::hypot(c, y) * (y1 - y0) / n;
      }
      oracle += s * lat.spacing;
    }
    EXPECT_NEAR(r.slice_integral, oracle, 1e-3 * oracle);
  }
}
