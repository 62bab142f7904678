#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bvlab {

inline constexpr double kPi = std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

inline Point polar_point(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

/// Distance from p to the closed segment [a, b].
inline double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  Point center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  bool valid() const { return width() > 0.0 && height() > 0.0; }

  bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }

  /// True when the closed disk B_r(c) lies inside the rectangle.
  bool contains_disk(Point c, double r) const {
    return c.x - r >= xmin && c.x + r <= xmax && c.y - r >= ymin && c.y + r <= ymax;
  }

  bool intersects_disk(Point c, double r) const {
    const double dx = std::max({xmin - c.x, 0.0, c.x - xmax});
    const double dy = std::max({ymin - c.y, 0.0, c.y - ymax});
    return dx * dx + dy * dy < r * r;
  }

  bool contains(const Rect& o) const {
    return o.xmin >= xmin && o.xmax <= xmax && o.ymin >= ymin && o.ymax <= ymax;
  }

  static Rect square(double half) { return {-half, -half, half, half}; }
};

struct Ball {
  Point center;
  double radius = 0.0;
};

/// 2x2 real matrix [[a, b], [c, d]] acting on column vectors.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 rotation(double phi) {
    const double cs = std::cos(phi), sn = std::sin(phi);
    return {cs, -sn, sn, cs};
  }

  double det() const { return a * d - b * c; }
  Point apply(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 inverse() const {
    const double D = det();
    return {d / D, -b / D, -c / D, a / D};
  }
  bool finite() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
  }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
            m.c * n.b + m.d * n.d};
  }
  friend Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
};

/// Outer product u v^T.
inline Mat2 outer(Point u, Point v) { return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y}; }

struct SingularValues {
  double max = 0.0;
  double min = 0.0;
};

// Closed form via the conformal/anticonformal split of a 2x2 matrix.
inline SingularValues singular_values(const Mat2& m) {
  const double e = 0.5 * (m.a + m.d);
  const double f = 0.5 * (m.a - m.d);
  const double g = 0.5 * (m.c + m.b);
  const double h = 0.5 * (m.c - m.b);
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  return {q + r, std::abs(q - r)};
}

inline double sigma_max(const Mat2& m) { return singular_values(m).max; }

}  // namespace bvlab
