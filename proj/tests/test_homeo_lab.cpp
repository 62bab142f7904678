#include <gtest/gtest.h>

#include <cmath>

#include "bvlab/homeo_lab.hpp"

using namespace bvlab;

namespace {

const Rect kWin{-2, -2, 2, 2};
const std::vector<double> kEps{1e-1, 1e-2, 1e-3, 1e-4};

// Twist: in the (r̂, t̂) frame Df is a rotation times [[1, 0], [a, 1]] with
// a = ∓2/r², whose largest singular value is (|a| + √(a² + 4)) / 2.
double twist_sigma(double r) {
  const double a = 2.0 / (r * r);
  return 0.5 * (a + std::sqrt(a * a + 4.0));
}

// 2π ∫_lo^hi g(r) r dr by the midpoint rule in u = log r.
double radial_oracle(const std::function<double(double)>& g, double lo, double hi, int n = 200000) {
  const double ua = std::log(lo), ub = std::log(hi), du = (ub - ua) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = std::exp(ua + (k + 0.5) * du);
    s += g(r) * r * r * du;
  }
  return 2.0 * kPi * s;
}

}  // namespace

TEST(Growth, ClassifiesSyntheticSequences) {
  std::vector<double> bounded, logarithmic, power;
  for (double e : kEps) {
    bounded.push_back(3.0 - e);
    logarithmic.push_back(2.0 * std::log(1.0 / e) + 1.0);
    power.push_back(std::pow(e, -0.5));
  }
  const auto b = classify_growth(kEps, bounded);
  EXPECT_EQ(b.growth_class, GrowthClass::Bounded);
  EXPECT_NEAR(b.limit, 3.0 - 1e-4, 1e-12);
  const auto l = classify_growth(kEps, logarithmic);
  EXPECT_EQ(l.growth_class, GrowthClass::Logarithmic);
  EXPECT_NEAR(l.rate, 2.0, 1e-12);
  const auto p = classify_growth(kEps, power);
  EXPECT_EQ(p.growth_class, GrowthClass::Power);
  EXPECT_NEAR(p.exponent, 0.5, 0.011);
}

TEST(Growth, RejectsBadSchedules) {
  EXPECT_THROW(classify_growth({0.1, 0.01}, {1.0, 2.0}), Error);
  EXPECT_THROW(classify_growth({0.1, 0.2, 0.01}, {1.0, 2.0, 3.0}), Error);
}

TEST(VariationPair, SquaringMapForwardBounded) {
  const auto f = builtin_homeo("radial_power");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(-1.5, kWin));
  EXPECT_EQ(fwd.growth_class, GrowthClass::Bounded);
  EXPECT_FALSE(fwd.infinite);
  EXPECT_NEAR(fwd.value, 4.0 * kPi / 3.0, 0.02 * 4.0 * kPi / 3.0);
  EXPECT_EQ(fwd.convention, "sigma_max");
}

TEST(VariationPair, SquaringMapInverseLogarithmic) {
  const auto f = builtin_homeo("radial_power");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(-1.5, kWin));
  EXPECT_EQ(inv.growth_class, GrowthClass::Logarithmic);
  EXPECT_TRUE(inv.infinite);
  EXPECT_NEAR(inv.growth_rate, 2.0 * kPi, 0.05 * 2.0 * kPi);
  EXPECT_GT(inv.fit_quality, 0.99);
  // σ_max(Df⁻¹) = r^{-1/2}, so each annulus carries 2π log(1/ε).
  for (std::size_t k = 0; k < kEps.size(); ++k)
    EXPECT_NEAR(inv.per_epsilon_values[k], 2.0 * kPi * std::log(1.0 / kEps[k]), 1e-6);
}

TEST(VariationPair, TwistForwardMatchesSingularValueOracle) {
  const auto f = builtin_homeo("radial_twist");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(1.0, kWin));
  EXPECT_EQ(fwd.growth_class, GrowthClass::Logarithmic);
  for (std::size_t k = 0; k < kEps.size(); ++k) {
    const double oracle = radial_oracle(twist_sigma, kEps[k], 1.0);
    EXPECT_NEAR(fwd.per_epsilon_values[k], oracle, 1e-6 * oracle);
  }
  EXPECT_NEAR(fwd.growth_rate, 4.0 * kPi, 0.05 * 4.0 * kPi);
}

TEST(VariationPair, TwistInverseBoundedWithLinearWeight) {
  const auto f = builtin_homeo("radial_twist");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(1.0, kWin));
  EXPECT_EQ(inv.growth_class, GrowthClass::Bounded);
  // r · σ_max · r = 1 + √(1 + r⁴) after the polar factor.
  const double limit = radial_oracle([](double r) { return twist_sigma(r) * r; }, kEps.back(), 1.0);
  EXPECT_NEAR(inv.value, limit, 1e-6 * limit);
  EXPECT_LT(inv.error_estimate, 1e-6 * limit);
}

TEST(VariationPair, PerEpsilonValuesNondecreasing) {
  for (const char* name : {"radial_power", "radial_twist", "swirl", "identity"}) {
    const auto f = builtin_homeo(name);
    const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::uniform(1.0, kWin));
    for (std::size_t k = 1; k < kEps.size(); ++k) {
      EXPECT_GE(fwd.per_epsilon_values[k], fwd.per_epsilon_values[k - 1]) << name;
      EXPECT_GE(inv.per_epsilon_values[k], inv.per_epsilon_values[k - 1]) << name;
    }
  }
}

TEST(VariationPair, ClassificationStableUnderQuadratureRefinement) {
  const auto f = builtin_homeo("radial_twist");
  VariationPairConfig fine;
  fine.quadrature = {64, 4};
  const auto a = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(1.0, kWin));
  const auto b = variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(1.0, kWin), fine);
  EXPECT_EQ(a.first.growth_class, b.first.growth_class);
  EXPECT_EQ(a.second.growth_class, b.second.growth_class);
}

TEST(VariationPair, RejectsBadInput) {
  const auto f = builtin_homeo("identity");
  VariationPairConfig cfg;
  cfg.eps = {0.1, 0.01};
  EXPECT_THROW(variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::uniform(1.0, kWin), cfg), Error);
  const auto small = WeightedPlane::uniform(1.0, Rect{-0.5, -0.5, 0.5, 0.5});
  EXPECT_THROW(variation_pair(f, small, WeightedPlane::uniform(1.0, kWin)), Error);
}

TEST(VariationPair, UndeclaredSingularityRaises) {
  HomeoSpec f = builtin_homeo("radial_twist");
  f.jacobian_forward = [](Point) { return Mat2{NAN, 0, 0, 1}; };
  try {
    variation_pair(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::uniform(1.0, kWin));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularityError);
  }
}

TEST(TwoSided, IdentityWithConstantTargetWeight) {
  const auto f = builtin_homeo("identity");
  for (double c : {1.0, 3.0}) {
    const auto rep = two_sided_check(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::uniform(c, kWin));
    EXPECT_NEAR(rep.ratio(), c, 0.02 * c);
    EXPECT_TRUE(rep.passes());
  }
}

TEST(TwoSided, ShearFamilyWithinCommonInterval) {
  const WeightedPlane osc(OscillatingDensity{}, Rect{-4, -4, 4, 4});
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto f = builtin_homeo("shear", {{"lambda", lambda}});
    const auto rep = two_sided_check(f, WeightedPlane::uniform(1.0, kWin), osc);
    EXPECT_TRUE(rep.passes()) << lambda;
    EXPECT_GE(rep.target_min, 0.5 - 1e-12);
    EXPECT_LE(rep.target_max, 2.0 + 1e-12);
  }
}

TEST(TwoSided, SwapGivesReciprocal) {
  const WeightedPlane src(OscillatingDensity{}, Rect{-4, -4, 4, 4});
  const WeightedPlane tgt = WeightedPlane::uniform(1.5, Rect{-4, -4, 4, 4});
  for (const auto& f : {builtin_homeo("linear", {{"a", 1.5}, {"b", 0.2}, {"d", 0.75}}), builtin_homeo("swirl")}) {
    const double r = two_sided_check(f, src, tgt).ratio();
    const double s = two_sided_check(f.inverted(), tgt, src).ratio();
    EXPECT_NEAR(r * s, 1.0, 0.02) << f.name;
  }
}

TEST(TwoSided, SingularTargetWeightNotApplicable) {
  const auto f = builtin_homeo("identity");
  try {
    two_sided_check(f, WeightedPlane::uniform(1.0, kWin), WeightedPlane::radial_power(-1.5, kWin));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApplicable);
  }
}

TEST(TwoSided, DivergentVariationNotApplicable) {
  try {
    two_sided_check(builtin_homeo("radial_twist"), WeightedPlane::uniform(1.0, kWin), WeightedPlane::uniform(1.0, kWin));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApplicable);
  }
}

TEST(SliceImage, IdentityOnSquare) {
  const auto f = builtin_homeo("identity", {}, Domain::box(Rect{-1, -1, 1, 1}));
  const auto rep = perimeter_vs_sliceimage(f, WeightedPlane::uniform(1.0, kWin), 0.0);
  EXPECT_NEAR(rep.h1_value, 2.0, 0.04);
  EXPECT_NEAR(rep.perimeter_value, 2.0, 0.04);
  EXPECT_TRUE(rep.holds());
}

TEST(SliceImage, HorizontalStretch) {
  const auto f = builtin_homeo("linear", {{"a", 2.0}}, Domain::box(Rect{-1, -1, 1, 1}));
  const auto rep = perimeter_vs_sliceimage(f, WeightedPlane::uniform(1.0, Rect{-3, -3, 3, 3}), 0.0);
  EXPECT_NEAR(rep.h1_value, 2.0, 0.04);
  EXPECT_NEAR(rep.perimeter_value, 2.0, 0.04);
}

TEST(SliceImage, SquaringMapOffCentre) {
  const auto f = builtin_homeo("radial_power");
  const auto rep = perimeter_vs_sliceimage(f, WeightedPlane::uniform(1.0, kWin), 0.3);
  EXPECT_TRUE(rep.holds());
  EXPECT_LE(rep.ratio(), rep.constant);
}

TEST(SliceImage, MissingSlice) {
  const auto f = builtin_homeo("identity");
  try {
    perimeter_vs_sliceimage(f, WeightedPlane::uniform(1.0, kWin), 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}
