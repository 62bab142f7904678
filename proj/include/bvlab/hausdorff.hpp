#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bvlab/curves.hpp"
#include "bvlab/error.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

/// ω_ν / 2^ν with ω_ν = π^{ν/2} / Γ(ν/2 + 1); equals 1 for ν = 1.
inline double hausdorff_normalization(double nu) {
  return std::pow(kPi, 0.5 * nu) / std::tgamma(0.5 * nu + 1.0) / std::pow(2.0, nu);
}

struct CoverEstimate {
  double value = 0.0;
  double delta = 0.0;
  std::vector<Ball> cover;
  double normalization = 1.0;
};

/// Balls of radius delta/2 centred every L/N along each curve (N = ⌈L/delta⌉),
/// so every arc of length delta is covered by one ball.
inline std::vector<Ball> arclength_cover(const std::vector<PolylineCurve>& curves, double delta) {
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::InvalidArgument, "covering scale must be positive");
  std::vector<Ball> balls;
  const double r = 0.5 * delta;
  for (const auto& c : curves) {
    c.validate();
    const auto table = arc_table(c);
    const double L = table.back();
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(L / delta - 1e-12)));
    const double step = L / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
      balls.push_back({point_at_arclength(c, table, step * (static_cast<double>(k) + 0.5)), r});
  }
  return balls;
}

/// True when every sample of the curves (spacing <= step) lies in some ball.
inline bool cover_contains(const std::vector<Ball>& cover, const std::vector<PolylineCurve>& curves, double step) {
  auto covered = [&](Point p) {
    for (const auto& b : cover)
      if (distance(p, b.center) <= b.radius * (1.0 + 1e-12)) return true;
    return false;
  };
  for (const auto& c : curves) {
    const auto table = arc_table(c);
    const double L = table.back();
    const int n = std::max(1, static_cast<int>(std::ceil(L / step)));
    for (int k = 0; k <= n; ++k)
      if (!covered(point_at_arclength(c, table, L * k / n))) return false;
  }
  return true;
}

inline CoverEstimate h1_cover_estimate(const std::vector<PolylineCurve>& curves, double delta) {
  CoverEstimate est;
  est.delta = delta;
  est.normalization = hausdorff_normalization(1.0);
  est.cover = arclength_cover(curves, delta);
  for (const auto& b : est.cover) est.value += est.normalization * 2.0 * b.radius;
  return est;
}

inline CoverEstimate h1_cover_estimate(const PolylineCurve& curve, double delta) {
  return h1_cover_estimate(std::vector<PolylineCurve>{curve}, delta);
}

/// Codimension-one content: each ball of the arc-length cover contributes m(B_r(x)) / r.
inline CoverEstimate hh_cover_estimate(const std::vector<PolylineCurve>& curves, const WeightedPlane& plane,
                                       double delta) {
  CoverEstimate est;
  est.delta = delta;
  est.normalization = 1.0;
  est.cover = arclength_cover(curves, delta);
  for (const auto& b : est.cover) {
    require(plane.window().contains_disk(b.center, b.radius), ErrorCode::ClippedBall,
            "covering ball escapes the window");
    est.value += ball_measure(plane, b.center, b.radius).value / b.radius;
  }
  return est;
}

inline CoverEstimate hh_cover_estimate(const PolylineCurve& curve, const WeightedPlane& plane, double delta) {
  return hh_cover_estimate(std::vector<PolylineCurve>{curve}, plane, delta);
}

struct ComparabilityReport {
  std::vector<double> deltas;
  std::vector<double> h1_values;
  std::vector<double> hh_values;
  std::vector<double> ratios;  // hh / h1
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double constant = 10.0;
  bool applicable = true;  // false when the plane fails the 2-Ahlfors check near the curve
  bool passes = false;     // interval ⊆ [1/C, C]
  AhlforsReport ahlfors;
};

struct ComparabilityConfig {
  double constant = 10.0;
  std::size_t centres_per_curve = 17;
  double rmin = 1e-4;
  double rmax = 0.5;
  std::size_t radii = 9;
  double frame_tolerance = 1e3;
};

inline ComparabilityReport comparability_check(const std::vector<PolylineCurve>& curves, const WeightedPlane& plane,
                                               const std::vector<double>& delta_ladder,
                                               const ComparabilityConfig& cfg = {}) {
  require(!delta_ladder.empty(), ErrorCode::InvalidArgument, "empty delta ladder");
  ComparabilityReport rep;
  rep.constant = cfg.constant;

  SampleConfig sc;
  sc.radii = geometric_ladder(cfg.rmin, cfg.rmax, cfg.radii);
  for (const auto& c : curves) {
    const auto table = arc_table(c);
    for (std::size_t k = 0; k < cfg.centres_per_curve; ++k)
      sc.centers.push_back(point_at_arclength(
          c, table, table.back() * static_cast<double>(k) / static_cast<double>(cfg.centres_per_curve - 1)));
  }
  rep.ahlfors = ahlfors_fit(plane, sc, 2.0, cfg.frame_tolerance);
  rep.applicable = rep.ahlfors.regular_2;

  rep.ratio_min = std::numeric_limits<double>::infinity();
  for (double delta : delta_ladder) {
    const double h1 = h1_cover_estimate(curves, delta).value;
    const double hh = hh_cover_estimate(curves, plane, delta).value;
    rep.deltas.push_back(delta);
    rep.h1_values.push_back(h1);
    rep.hh_values.push_back(hh);
    rep.ratios.push_back(hh / h1);
    rep.ratio_min = std::min(rep.ratio_min, hh / h1);
    rep.ratio_max = std::max(rep.ratio_max, hh / h1);
  }
  rep.passes = rep.applicable && rep.ratio_min >= 1.0 / cfg.constant && rep.ratio_max <= cfg.constant;
  return rep;
}

}  // namespace bvlab
