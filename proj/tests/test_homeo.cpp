#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bvlab/homeo.hpp"

using namespace bvlab;

namespace {

std::vector<Point> sample_points(std::size_t n, double rmin, double rmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> R(rmin, rmax), T(0.0, 2.0 * kPi);
  std::vector<Point> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(polar_point(R(rng), T(rng)));
  return out;
}

void expect_mat_near(const Mat2& a, const Mat2& b, double tol) {
  EXPECT_NEAR(a.a, b.a, tol);
  EXPECT_NEAR(a.b, b.b, tol);
  EXPECT_NEAR(a.c, b.c, tol);
  EXPECT_NEAR(a.d, b.d, tol);
}

HomeoSpec family(const std::string& name) {
  if (name == "linear") return builtin_homeo(name, {{"a", 1.5}, {"b", 0.3}, {"c", -0.2}, {"d", 0.75}});
  if (name == "shear") return builtin_homeo(name, {{"lambda", 0.5}});
  return builtin_homeo(name);
}

}  // namespace

TEST(RadialPower, ForwardEntryMatchesClosedForm) {
  const auto f = builtin_homeo("radial_power");
  for (Point p : sample_points(200, 0.05, 1.0, 1)) {
    const double r = norm(p), th = std::atan2(p.y, p.x);
    const double expect = 2.0 * r * std::cos(th) * std::cos(th) + r * std::sin(th) * std::sin(th);
    EXPECT_NEAR(f.jac_forward(p).a, expect, 1e-12);
  }
  EXPECT_NEAR(f.jac_forward({0.5, 0.0}).a, 1.0, 1e-15);
}

TEST(RadialPower, InverseEntryMatchesClosedForm) {
  const auto f = builtin_homeo("radial_power");
  for (Point q : sample_points(200, 0.05, 1.0, 2)) {
    const double r = norm(q), th = std::atan2(q.y, q.x);
    const double expect = -1.0 / (2.0 * std::sqrt(r)) * std::sin(th) * std::cos(th);
    EXPECT_NEAR(f.jac_inverse(q).c, expect, 1e-12);
  }
}

TEST(RadialTwist, ForwardEntryMatchesClosedForm) {
  const auto f = builtin_homeo("radial_twist");
  for (Point p : sample_points(200, 0.3, 1.0, 3)) {
    const double r = norm(p), th = std::atan2(p.y, p.x), ph = th + 1.0 / (r * r);
    const double expect =
        std::cos(th) * std::cos(ph) + std::sin(th) * std::sin(ph) + 2.0 / (r * r) * std::cos(th) * std::sin(ph);
    EXPECT_NEAR(f.jac_forward(p).a, expect, 1e-11);
  }
}

TEST(RadialTwist, InverseEntryMatchesClosedForm) {
  const auto f = builtin_homeo("radial_twist");
  for (Point q : sample_points(200, 0.3, 1.0, 4)) {
    const double r = norm(q), th = std::atan2(q.y, q.x), ph = th - 1.0 / (r * r);
    const double expect =
        std::cos(th) * std::cos(ph) + std::sin(th) * std::sin(ph) - 2.0 / (r * r) * std::cos(th) * std::sin(ph);
    EXPECT_NEAR(f.jac_inverse(q).a, expect, 1e-11);
  }
}

class BuiltinFamily : public ::testing::TestWithParam<std::string> {};

TEST_P(BuiltinFamily, RoundTripOnAThousandPoints) {
  const auto f = family(GetParam());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (Point p : sample_points(1000, 0.05, 0.99, 5)) {
    // Rounding in f(p) is magnified by |Df⁻¹| on the way back, and vice versa.
    const Point q = f.forward(p);
    const double back = std::max(1.0, norm(p)) * std::max(1.0, sigma_max(f.jac_inverse(q)));
    EXPECT_LE(distance(f.inverse(q), p), 10.0 * eps * back);
    const Point g = f.inverse(p);
    const double fwd = std::max(1.0, norm(p)) * std::max(1.0, sigma_max(f.jac_forward(g)));
    EXPECT_LE(distance(f.forward(g), p), 10.0 * eps * fwd);
  }
}

TEST_P(BuiltinFamily, AnalyticJacobianMatchesFiniteDifferences) {
  const auto f = family(GetParam());
  for (Point p : sample_points(100, 0.3, 0.95, 6)) {
    const Mat2 J = f.jac_forward(p);
    expect_mat_near(J, finite_difference_jacobian(f.forward, p, 1e-6), 1e-5 * (1.0 + sigma_max(J)));
    const Point q = f.forward(p);
    const Mat2 K = f.jac_inverse(q);
    expect_mat_near(K, finite_difference_jacobian(f.inverse, q, 1e-6), 1e-5 * (1.0 + sigma_max(K)));
  }
}

TEST_P(BuiltinFamily, InverseJacobianIsMatrixInverse) {
  const auto f = family(GetParam());
  for (Point p : sample_points(100, 0.2, 0.95, 7)) {
    const Mat2 P = f.jac_forward(p) * f.jac_inverse(f.forward(p));
    expect_mat_near(P, Mat2::identity(), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Families, BuiltinFamily,
                         ::testing::Values("identity", "linear", "shear", "radial_power", "radial_twist", "swirl"));

TEST(Homeo, UnknownFamilyRejected) {
  try {
    builtin_homeo("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  EXPECT_THROW(builtin_homeo("linear", {{"a", 1}, {"b", 2}, {"c", 2}, {"d", 4}}), Error);
  EXPECT_THROW(builtin_homeo("radial_power", {{"exponent", -1.0}}), Error);
}

TEST(Homeo, ImageDomainOfRadialPowerIsUnitDisk) {
  const auto f = builtin_homeo("radial_power");
  const Domain om = f.image_domain();
  EXPECT_TRUE(om.contains({0.5, 0.5}));
  EXPECT_FALSE(om.contains({0.8, 0.8}));
  EXPECT_NEAR(om.bbox.xmax, 1.0, 1e-6);
  EXPECT_NEAR(om.radial_extent(0.3), 1.0, 1e-9);
}

TEST(Homeo, InvertedSwapsDirections) {
  const auto f = builtin_homeo("linear", {{"a", 2.0}, {"d", 0.5}});
  const auto g = f.inverted();
  EXPECT_NEAR(distance(g.forward({1, 1}), {0.5, 2.0}), 0.0, 1e-15);
  EXPECT_NEAR(g.source.bbox.xmax, 2.0, 1e-6);
  EXPECT_NEAR(g.source.bbox.ymax, 0.5, 1e-6);
  EXPECT_EQ(g.name, "linear^-1");
}

TEST(Homeo, SingularPointsDeclared) {
  EXPECT_EQ(builtin_homeo("radial_twist").singular_points.size(), 1u);
  EXPECT_TRUE(builtin_homeo("swirl").singular_points.empty());
  EXPECT_TRUE(builtin_homeo("radial_power").is_singular({0, 0}, 0.0));
}

TEST(UserDefined, SampledLinearMapRoundTrips) {
  const Rect src{-1, -1, 1, 1};
  const Mat2 A{1.2, 0.4, 0.0, 0.9};
  const Lattice lf = Lattice::over(src, 64);
  const MapField fwd = MapField::sample(lf, [A](Point p) { return A.apply(p); });
  const Lattice li = Lattice::over(Rect{-2, -1.5, 2, 1.5}, 128);
  const MapField inv = MapField::sample(li, [Ai = A.inverse()](Point q) { return Ai.apply(q); });
  const auto h = user_defined_homeo(fwd, inv);
  for (Point p : sample_points(100, 0.0, 0.9, 8)) {
    EXPECT_NEAR(distance(h.inverse(h.forward(p)), p), 0.0, 1e-12);
    expect_mat_near(h.jac_forward(p), A, 1e-9);
  }
}

TEST(MapField, MismatchedLatticesRejected) {
  const GridField a = GridField::constant(Lattice::over(Rect{0, 0, 1, 1}, 4), 0.0);
  const GridField b = GridField::constant(Lattice::over(Rect{0, 0, 1, 1}, 8), 0.0);
  EXPECT_THROW(MapField(a, b), Error);
}
