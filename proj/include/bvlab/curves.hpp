#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"

namespace bvlab {

/// Ordered list of planar points. A closed curve repeats its first point at
/// the end. `times` optionally carries the parameter value of every vertex
/// (strictly increasing); when empty, vertex k sits at parameter k.
struct PolylineCurve {
  std::vector<Point> points;
  bool closed = false;
  std::vector<double> times;

  std::size_t segments() const { return points.empty() ? 0 : points.size() - 1; }

  double time_at(std::size_t k) const { return times.empty() ? static_cast<double>(k) : times[k]; }
  double t_begin() const { return time_at(0); }
  double t_end() const { return time_at(points.size() - 1); }

  void validate() const {
    require(!points.empty(), ErrorCode::InvalidArgument, "curve needs at least one point");
    if (closed)
      require(points.size() >= 2 && points.front() == points.back(), ErrorCode::InvalidArgument,
              "closed curve must repeat its first point");
    if (!times.empty()) {
      require(times.size() == points.size(), ErrorCode::InvalidArgument, "times must match points");
      for (std::size_t k = 1; k < times.size(); ++k)
        require(times[k] > times[k - 1], ErrorCode::InvalidArgument, "times must be strictly increasing");
    }
  }

  PolylineCurve reversed() const {
    PolylineCurve out{{points.rbegin(), points.rend()}, closed, {}};
    return out;
  }
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline PolylineCurve segment_curve(Point a, Point b, std::size_t pieces = 1) {
  PolylineCurve c;
  for (std::size_t k = 0; k <= pieces; ++k)
    c.points.push_back(a + (static_cast<double>(k) / static_cast<double>(pieces)) * (b - a));
  return c;
}

/// Closed curve through `n` samples of a periodic parametrization on [0, 2π).
inline PolylineCurve sampled_closed_curve(const std::function<Point(double)>& param, std::size_t n) {
  require(n >= 3, ErrorCode::InvalidArgument, "closed curve needs at least 3 samples");
  PolylineCurve c;
  c.closed = true;
  for (std::size_t k = 0; k < n; ++k) c.points.push_back(param(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
  c.points.push_back(c.points.front());
  return c;
}

inline PolylineCurve circle_curve(Point center, double radius, std::size_t n) {
  return sampled_closed_curve([=](double t) { return center + polar_point(radius, t); }, n);
}

inline PolylineCurve ellipse_curve(Point center, double a, double b, std::size_t n) {
  return sampled_closed_curve([=](double t) { return center + Point{a * std::cos(t), b * std::sin(t)}; }, n);
}

/// Axis-aligned square boundary, each side split into `per_side` pieces.
inline PolylineCurve square_curve(Point center, double side, std::size_t per_side) {
  const double h = 0.5 * side;
  const Point corners[4] = {{center.x - h, center.y - h}, {center.x + h, center.y - h},
                            {center.x + h, center.y + h}, {center.x - h, center.y + h}};
  PolylineCurve c;
  c.closed = true;
  for (int s = 0; s < 4; ++s) {
    const Point a = corners[s], b = corners[(s + 1) % 4];
    for (std::size_t k = 0; k < per_side; ++k)
      c.points.push_back(a + (static_cast<double>(k) / static_cast<double>(per_side)) * (b - a));
  }
  c.points.push_back(c.points.front());
  return c;
}

// ---------------------------------------------------------------------------
// Length and parametrization
// ---------------------------------------------------------------------------

/// Sum of segment lengths: the partition supremum for a polyline.
inline double length(const PolylineCurve& curve) {
  double L = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) L += distance(curve.points[k - 1], curve.points[k]);
  return L;
}

inline double total_length(const std::vector<PolylineCurve>& curves) {
  double L = 0.0;
  for (const auto& c : curves) L += length(c);
  return L;
}

/// Cumulative arc length at every vertex.
inline std::vector<double> arc_table(const PolylineCurve& curve) {
  std::vector<double> s(curve.points.size(), 0.0);
  for (std::size_t k = 1; k < curve.points.size(); ++k)
    s[k] = s[k - 1] + distance(curve.points[k - 1], curve.points[k]);
  return s;
}

/// Point at parameter t (linear on each segment).
inline Point point_at(const PolylineCurve& curve, double t) {
  curve.validate();
  if (curve.points.size() == 1) return curve.points.front();
  t = std::clamp(t, curve.t_begin(), curve.t_end());
  std::size_t k = 0;
  while (k + 2 < curve.points.size() && curve.time_at(k + 1) <= t) ++k;
  const double t0 = curve.time_at(k), t1 = curve.time_at(k + 1);
  const double u = (t - t0) / (t1 - t0);
  return curve.points[k] + u * (curve.points[k + 1] - curve.points[k]);
}

/// Σ d(γ(t_i), γ(t_{i-1})) over a partition given as increasing parameters.
inline double partition_sum(const PolylineCurve& curve, const std::vector<double>& partition) {
  double s = 0.0;
  for (std::size_t k = 1; k < partition.size(); ++k)
    s += distance(point_at(curve, partition[k - 1]), point_at(curve, partition[k]));
  return s;
}

/// Point at arc length s along the curve, using a precomputed arc table.
inline Point point_at_arclength(const PolylineCurve& curve, const std::vector<double>& table, double s) {
  if (s <= 0.0) return curve.points.front();
  if (s >= table.back()) return curve.points.back();
  const auto it = std::upper_bound(table.begin(), table.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - table.begin()) - 1;
  const double seg = table[k + 1] - table[k];
  const double u = seg > 0 ? (s - table[k]) / seg : 0.0;
  return curve.points[k] + u * (curve.points[k + 1] - curve.points[k]);
}

/// Resample at n points equally spaced in arc length. Open curves get both
/// endpoints (spacing L/(n-1)); closed curves get n distinct points at
/// spacing L/n plus the repeated closing point. Vertex times are arc lengths,
/// so the result has unit metric speed.
inline PolylineCurve arclength_reparam(const PolylineCurve& curve, std::size_t n) {
  curve.validate();
  require(n >= 2, ErrorCode::InvalidArgument, "arc-length resampling needs n >= 2");
  const auto table = arc_table(curve);
  const double L = table.back();
  require(L > 0.0, ErrorCode::DegenerateCurve, "curve has zero length");
  PolylineCurve out;
  out.closed = curve.closed;
  const double step = curve.closed ? L / static_cast<double>(n) : L / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = step * static_cast<double>(k);
    out.points.push_back(point_at_arclength(curve, table, s));
    out.times.push_back(s);
  }
  if (curve.closed) {
    out.points.push_back(out.points.front());
    out.times.push_back(L);
  } else {
    out.points.back() = curve.points.back();
    out.times.back() = L;
  }
  return out;
}

/// Limit of d(γ(s), γ(t)) / |s - t| at an interior, non-vertex parameter.
inline double metric_speed(const PolylineCurve& curve, double t) {
  curve.validate();
  require(curve.points.size() >= 2, ErrorCode::DegenerateCurve, "single-point curve has no speed");
  require(t > curve.t_begin() && t < curve.t_end(), ErrorCode::InvalidArgument, "parameter outside the open interval");
  const double span = curve.t_end() - curve.t_begin();
  for (std::size_t k = 0; k < curve.points.size(); ++k)
    require(std::abs(t - curve.time_at(k)) > 1e-12 * span, ErrorCode::UndefinedAtVertex, "metric speed requested at a vertex");
  std::size_t k = 0;
  while (curve.time_at(k + 1) < t) ++k;
  return distance(curve.points[k], curve.points[k + 1]) / (curve.time_at(k + 1) - curve.time_at(k));
}

// ---------------------------------------------------------------------------
// Simplicity
// ---------------------------------------------------------------------------

namespace detail {

inline int orient(Point a, Point b, Point c) {
  const long double v = static_cast<long double>(b.x - a.x) * (c.y - a.y) -
                        static_cast<long double>(b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace detail

/// True when no two non-adjacent segments meet, and adjacent segments share
/// only their common endpoint (up to `eps`).
inline bool is_simple(const PolylineCurve& curve, double eps = 1e-12) {
  curve.validate();
  const auto& p = curve.points;
  const std::size_t m = curve.segments();
  if (m < 2) return true;
  auto adjacent = [&](std::size_t i, std::size_t j) {
    if (j == i + 1) return true;
    return curve.closed && i == 0 && j == m - 1;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (distance(p[i], p[i + 1]) <= eps) return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (adjacent(i, j)) {
        // Folding back onto the previous segment is a self-intersection.
        const Point shared = (j == i + 1) ? p[i + 1] : p[0];
        const Point u = (j == i + 1) ? p[i] : p[1];
        const Point v = (j == i + 1) ? p[j + 1] : p[m - 1];
        if (detail::orient(u, shared, v) == 0 && dot(u - shared, v - shared) > 0) return false;
        continue;
      }
      if (detail::segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Distances between curves
// ---------------------------------------------------------------------------

inline double point_curve_distance(Point q, const PolylineCurve& c) {
  if (c.points.size() == 1) return distance(q, c.points.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < c.points.size(); ++k)
    best = std::min(best, point_segment_distance(q, c.points[k], c.points[k + 1]));
  return best;
}

/// sup over points of `a` of the distance to `b`, sampling `a` at spacing <= step.
inline double directed_hausdorff(const std::vector<PolylineCurve>& a, const std::vector<PolylineCurve>& b,
                                 double step) {
  double worst = 0.0;
  auto visit = [&](Point q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : b) best = std::min(best, point_curve_distance(q, c));
    worst = std::max(worst, best);
  };
  for (const auto& c : a) {
    visit(c.points.front());
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
      const double len = distance(c.points[k], c.points[k + 1]);
      const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int s = 1; s <= pieces; ++s)
        visit(c.points[k] + (static_cast<double>(s) / pieces) * (c.points[k + 1] - c.points[k]));
    }
  }
  return worst;
}

inline double hausdorff_distance(const std::vector<PolylineCurve>& a, const std::vector<PolylineCurve>& b,
                                 double step) {
  return std::max(directed_hausdorff(a, b, step), directed_hausdorff(b, a, step));
}

}  // namespace bvlab
