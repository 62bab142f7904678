#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"
#include "bvlab/grid.hpp"

namespace bvlab {

using PlaneMap = std::function<Point(Point)>;
using JacobianField = std::function<Mat2(Point)>;

/// An open planar domain given by a membership test and a bounding box.
/// Every domain used here is star-shaped about `star_center`.
struct Domain {
  std::function<bool(Point)> contains;
  Rect bbox;
  Point star_center{0.0, 0.0};
  std::string description;

  static Domain disk(Point c, double r) {
    return {[=](Point p) { return distance(p, c) < r; }, Rect{c.x - r, c.y - r, c.x + r, c.y + r}, c, "disk"};
  }
  static Domain box(const Rect& r) {
    return {[=](Point p) { return p.x > r.xmin && p.x < r.xmax && p.y > r.ymin && p.y < r.ymax; }, r, r.center(), "box"};
  }

  /// Largest ρ with star_center + ρ(cos θ, sin θ) inside, by bisection.
  double radial_extent(double theta) const {
    const Point dir = polar_point(1.0, theta);
    double lo = 0.0;
    double hi = std::hypot(bbox.width(), bbox.height()) + distance(star_center, bbox.center());
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (contains(star_center + mid * dir) ? lo : hi) = mid;
    }
    return lo;
  }
};

/// Points along the boundary of a domain (for bounding the image domain).
inline std::vector<Point> boundary_samples(const Domain& d, std::size_t n) {
  std::vector<Point> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    out.push_back(d.star_center + d.radial_extent(th) * polar_point(1.0, th));
  }
  return out;
}

/// Central finite-difference Jacobian of a planar map.
inline Mat2 finite_difference_jacobian(const PlaneMap& f, Point p, double step) {
  const Point fx = f(p + Point{step, 0}) - f(p - Point{step, 0});
  const Point fy = f(p + Point{0, step}) - f(p - Point{0, step});
  const double s = 0.5 / step;
  return {s * fx.x, s * fy.x, s * fx.y, s * fy.y};
}

/// A homeomorphism f : G → Ω = f(G) with its inverse and (optionally)
/// analytic Jacobians. Singular points are given in source coordinates.
struct HomeoSpec {
  std::string name;
  std::map<std::string, double> params;
  PlaneMap forward;
  PlaneMap inverse;
  JacobianField jacobian_forward;  // may be empty: finite differences are used
  JacobianField jacobian_inverse;
  std::vector<Point> singular_points;
  Domain source;
  double fd_step = 1e-6;

  Mat2 jac_forward(Point p) const {
    return jacobian_forward ? jacobian_forward(p) : finite_difference_jacobian(forward, p, fd_step);
  }
  Mat2 jac_inverse(Point q) const {
    return jacobian_inverse ? jacobian_inverse(q) : finite_difference_jacobian(inverse, q, fd_step);
  }

  std::vector<Point> image_singular_points() const {
    std::vector<Point> out;
    for (Point p : singular_points) out.push_back(forward(p));
    return out;
  }

  /// The image domain Ω = f(G).
  Domain image_domain() const {
    const auto fwd = forward;
    const auto inv = inverse;
    const auto src = source.contains;
    Rect box{1e300, 1e300, -1e300, -1e300};
    for (Point p : boundary_samples(source, 4096)) {
      const Point q = fwd(p);
      box.xmin = std::min(box.xmin, q.x);
      box.xmax = std::max(box.xmax, q.x);
      box.ymin = std::min(box.ymin, q.y);
      box.ymax = std::max(box.ymax, q.y);
    }
    const double pad = 1e-9 * std::max(box.width(), box.height());
    box = {box.xmin - pad, box.ymin - pad, box.xmax + pad, box.ymax + pad};
    return {[=](Point q) { return src(inv(q)); }, box, fwd(source.star_center), "image of " + source.description};
  }

  /// The inverse homeomorphism Ω → G.
  HomeoSpec inverted() const {
    HomeoSpec h;
    h.name = name + "^-1";
    h.params = params;
    h.forward = inverse;
    h.inverse = forward;
    h.jacobian_forward = jacobian_inverse;
    h.jacobian_inverse = jacobian_forward;
    h.singular_points = image_singular_points();
    h.source = image_domain();
    h.fd_step = fd_step;
    return h;
  }

  bool is_singular(Point p, double tol) const {
    for (Point s : singular_points)
      if (distance(p, s) <= tol) return true;
    return false;
  }
};

namespace detail {

inline double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// x ↦ |x|^(p-1) x, with Jacobian |x|^(p-1) (I + (p-1) x̂ x̂ᵀ).
inline PlaneMap radial_power_map(double p) {
  return [p](Point x) {
    const double r = norm(x);
    return r == 0.0 ? Point{0, 0} : std::pow(r, p - 1.0) * x;
  };
}
inline JacobianField radial_power_jacobian(double p) {
  return [p](Point x) {
    const double r = norm(x);
    const Point u = (1.0 / r) * x;
    return std::pow(r, p - 1.0) * (Mat2::identity() + (p - 1.0) * outer(u, u));
  };
}

// x ↦ R(φ(|x|)) x, with Jacobian R(φ) (I + r φ'(r) t̂ r̂ᵀ), t̂ = r̂ turned by +90°.
struct TwistProfile {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
};
inline PlaneMap twist_map(TwistProfile prof) {
  return [prof](Point x) {
    const double r = norm(x);
    return r == 0.0 ? Point{0, 0} : Mat2::rotation(prof.phi(r)).apply(x);
  };
}
inline JacobianField twist_jacobian(TwistProfile prof) {
  return [prof](Point x) {
    const double r = norm(x);
    const Point rh = (1.0 / r) * x;
    const Point th{-rh.y, rh.x};
    return Mat2::rotation(prof.phi(r)) * (Mat2::identity() + (r * prof.dphi(r)) * outer(th, rh));
  };
}

inline HomeoSpec linear_homeo(std::string name, std::map<std::string, double> params, Mat2 A, Domain source) {
  require(std::abs(A.det()) > 1e-14, ErrorCode::InvalidArgument, "linear map must be invertible");
  const Mat2 Ai = A.inverse();
  HomeoSpec h;
  h.name = std::move(name);
  h.params = std::move(params);
  h.forward = [A](Point p) { return A.apply(p); };
  h.inverse = [Ai](Point q) { return Ai.apply(q); };
  h.jacobian_forward = [A](Point) { return A; };
  h.jacobian_inverse = [Ai](Point) { return Ai; };
  h.source = std::move(source);
  return h;
}

}  // namespace detail

/// Built-in families:
///   identity
///   linear        a, b, c, d        x ↦ [[a, b], [c, d]] x
///   shear         lambda            (x, y) ↦ (x + λy, y)
///   radial_power  exponent (2)      r e^{iθ} ↦ r^p e^{iθ}
///   radial_twist  strength (1)      r e^{iθ} ↦ r e^{i(θ + k/r²)}
///   swirl         beta (1)          r e^{iθ} ↦ r e^{i(θ + β r²)}
/// The source domain defaults to the unit disk.
inline HomeoSpec builtin_homeo(const std::string& name, const std::map<std::string, double>& params = {},
                               std::optional<Domain> source = std::nullopt) {
  using detail::param_or;
  const Domain G = source ? *source : Domain::disk({0, 0}, 1.0);
  if (name == "identity") return detail::linear_homeo(name, params, Mat2::identity(), G);
  if (name == "linear") {
    const Mat2 A{param_or(params, "a", 1.0), param_or(params, "b", 0.0), param_or(params, "c", 0.0),
                 param_or(params, "d", 1.0)};
    return detail::linear_homeo(name, params, A, G);
  }
  if (name == "shear") {
    const double lambda = param_or(params, "lambda", 1.0);
    return detail::linear_homeo(name, params, Mat2{1.0, lambda, 0.0, 1.0}, G);
  }
  if (name == "radial_power") {
    const double p = param_or(params, "exponent", 2.0);
    require(p > 0.0, ErrorCode::InvalidArgument, "radial_power exponent must be positive");
    HomeoSpec h;
    h.name = name;
    h.params = params;
    h.forward = detail::radial_power_map(p);
    h.inverse = detail::radial_power_map(1.0 / p);
    h.jacobian_forward = detail::radial_power_jacobian(p);
    h.jacobian_inverse = detail::radial_power_jacobian(1.0 / p);
    h.singular_points = {{0, 0}};
    h.source = G;
    return h;
  }
  if (name == "radial_twist" || name == "swirl") {
    const bool twist = name == "radial_twist";
    const double k = twist ? param_or(params, "strength", 1.0) : param_or(params, "beta", 1.0);
    detail::TwistProfile fwd, inv;
    if (twist) {
      fwd = {[k](double r) { return k / (r * r); }, [k](double r) { return -2.0 * k / (r * r * r); }};
      inv = {[k](double r) { return -k / (r * r); }, [k](double r) { return 2.0 * k / (r * r * r); }};
    } else {
      fwd = {[k](double r) { return k * r * r; }, [k](double r) { return 2.0 * k * r; }};
      inv = {[k](double r) { return -k * r * r; }, [k](double r) { return -2.0 * k * r; }};
    }
    HomeoSpec h;
    h.name = name;
    h.params = params;
    h.forward = detail::twist_map(fwd);
    h.inverse = detail::twist_map(inv);
    h.jacobian_forward = detail::twist_jacobian(fwd);
    h.jacobian_inverse = detail::twist_jacobian(inv);
    if (twist) h.singular_points = {{0, 0}};
    h.source = G;
    return h;
  }
  if (name == "user_defined")
    throw Error(ErrorCode::InvalidArgument, "user_defined maps are built from sampled map fields");
  throw Error(ErrorCode::InvalidArgument, "unknown homeomorphism family '" + name + "'");
}

inline const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names{"identity", "linear", "shear", "radial_power", "radial_twist", "swirl"};
  return names;
}

// ---------------------------------------------------------------------------
// Sampled maps
// ---------------------------------------------------------------------------

/// A map G → R² sampled on a lattice as two component fields.
struct MapField {
  GridField u;
  GridField v;

  MapField() = default;
  MapField(GridField fu, GridField fv) : u(std::move(fu)), v(std::move(fv)) {
    require(u.lattice.same_as(v.lattice), ErrorCode::InvalidArgument, "map components on different lattices");
  }

  static MapField sample(const Lattice& lat, const PlaneMap& f) {
    std::vector<double> us(lat.size()), vs(lat.size());
    for (std::size_t j = 0; j < lat.ny; ++j)
      for (std::size_t i = 0; i < lat.nx; ++i) {
        const Point q = f(lat.node(i, j));
        us[lat.index(i, j)] = q.x;
        vs[lat.index(i, j)] = q.y;
      }
    return {GridField(lat, std::move(us)), GridField(lat, std::move(vs))};
  }

  const Lattice& lattice() const { return u.lattice; }
  Point at(std::size_t i, std::size_t j) const { return {u.at(i, j), v.at(i, j)}; }
  Point interpolate(Point p) const { return {u.interpolate(p), v.interpolate(p)}; }
};

/// user_defined family: forward and inverse given as sampled map fields,
/// evaluated by bilinear interpolation; Jacobians by finite differences.
inline HomeoSpec user_defined_homeo(MapField forward, MapField inverse, std::optional<Domain> source = std::nullopt) {
  auto fwd = std::make_shared<const MapField>(std::move(forward));
  auto inv = std::make_shared<const MapField>(std::move(inverse));
  HomeoSpec h;
  h.name = "user_defined";
  h.forward = [fwd](Point p) { return fwd->interpolate(p); };
  h.inverse = [inv](Point q) { return inv->interpolate(q); };
  h.fd_step = 0.5 * fwd->lattice().spacing;
  const Rect hull = fwd->lattice().node_hull();
  h.source = source ? *source : Domain::box(hull);
  return h;
}

}  // namespace bvlab
