#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bvlab/bv_scalar.hpp"
#include "bvlab/homeo.hpp"
#include "bvlab/report.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

/// Family of 1-Lipschitz test functions on the target: cones d(·, p) about
/// anchor points and signed distances to lines through `halfplane_origin`
/// with unit normals.
struct LipschitzDictionary {
  std::vector<Point> anchors;
  std::vector<Point> halfplane_normals;
  Point halfplane_origin{0, 0};

  std::size_t size() const { return anchors.size() + halfplane_normals.size(); }

  double evaluate(std::size_t k, Point y) const {
    if (k < anchors.size()) return distance(y, anchors[k]);
    return dot(y - halfplane_origin, halfplane_normals[k - anchors.size()]);
  }
};

/// `ring` cone anchors evenly spaced on a circle inscribed in the target
/// window (radius 0.45 of the smaller side), plus `directions` half-plane
/// normals evenly spaced on the half-circle.
inline LipschitzDictionary default_dictionary(const Rect& target_window, std::size_t ring, std::size_t directions) {
  LipschitzDictionary d;
  const Point c = target_window.center();
  const double R = 0.45 * std::min(target_window.width(), target_window.height());
  for (std::size_t k = 0; k < ring; ++k)
    d.anchors.push_back(c + polar_point(R, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(ring)));
  for (std::size_t k = 0; k < directions; ++k)
    d.halfplane_normals.push_back(polar_point(1.0, kPi * static_cast<double>(k) / static_cast<double>(directions)));
  d.halfplane_origin = c;
  return d;
}

/// Cellwise supremum over the dictionary of lip(φ ∘ f), integrated against
/// the source weight. A lower bound for exact_variation.
inline VariationReport dictionary_variation(const MapField& map, const WeightedPlane& plane,
                                            const LipschitzDictionary& dict) {
  require(dict.size() > 0, ErrorCode::InvalidArgument, "empty Lipschitz dictionary");
  const Lattice& lat = map.lattice();
  require(detail::lattice_inside_plane(lat, plane), ErrorCode::InvalidArgument, "map lattice must lie in the plane window");
  std::vector<double> best(lat.size(), 0.0);
  std::vector<double> composed(lat.size());
  for (std::size_t k = 0; k < dict.size(); ++k) {
    for (std::size_t j = 0; j < lat.ny; ++j)
      for (std::size_t i = 0; i < lat.nx; ++i) composed[lat.index(i, j)] = dict.evaluate(k, map.at(i, j));
    const GridField lip = discrete_lip(GridField(lat, composed));
    for (std::size_t n = 0; n < best.size(); ++n) best[n] = std::max(best[n], lip.values[n]);
  }
  const auto sum = detail::integrate_nodes(GridField(lat, std::move(best)), plane);
  VariationReport rep;
  rep.value = sum.value;
  rep.excluded_nodes = sum.excluded;
  rep.spacing = lat.spacing;
  rep.resolution = std::max(lat.nx, lat.ny);
  return rep;
}

/// Central-difference Jacobian of a sampled map at node (i, j).
inline Mat2 lattice_jacobian(const MapField& map, std::size_t i, std::size_t j) {
  const Lattice& lat = map.lattice();
  const std::size_t il = i > 0 ? i - 1 : i, ir = i + 1 < lat.nx ? i + 1 : i;
  const std::size_t jl = j > 0 ? j - 1 : j, jr = j + 1 < lat.ny ? j + 1 : j;
  const double hx = lat.spacing * static_cast<double>(ir - il);
  const double hy = lat.spacing * static_cast<double>(jr - jl);
  const Point dx = (1.0 / hx) * (map.at(ir, j) - map.at(il, j));
  const Point dy = (1.0 / hy) * (map.at(i, jr) - map.at(i, jl));
  return {dx.x, dy.x, dx.y, dy.y};
}

/// ∫ σ_max(Df) w dL² for a sampled map, Jacobian by central differences.
inline VariationReport exact_variation(const MapField& map, const WeightedPlane& plane) {
  const Lattice& lat = map.lattice();
  require(detail::lattice_inside_plane(lat, plane), ErrorCode::InvalidArgument, "map lattice must lie in the plane window");
  std::vector<double> density(lat.size());
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) density[lat.index(i, j)] = sigma_max(lattice_jacobian(map, i, j));
  const auto sum = detail::integrate_nodes(GridField(lat, std::move(density)), plane);
  VariationReport rep;
  rep.value = sum.value;
  rep.excluded_nodes = sum.excluded;
  rep.spacing = lat.spacing;
  rep.resolution = std::max(lat.nx, lat.ny);
  return rep;
}

/// ∫_G σ_max(Df) w dL² for an analytic homeomorphism, midpoint rule on the
/// nodes of `lat` lying in the source domain. Declared singular points are
/// skipped; a non-finite Jacobian anywhere else is an error.
inline VariationReport exact_variation(const HomeoSpec& homeo, const WeightedPlane& plane, const Lattice& lat) {
  VariationReport rep;
  rep.spacing = lat.spacing;
  rep.resolution = std::max(lat.nx, lat.ny);
  const double tol = 1e-9 * lat.spacing;
  double sum = 0.0;
  for (std::size_t j = 0; j < lat.ny; ++j) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      const Point p = lat.node(i, j);
      if (!homeo.source.contains(p)) continue;
      if (homeo.is_singular(p, tol) || plane.is_singular(p, tol)) {
        ++rep.excluded_nodes;
        continue;
      }
      const Mat2 J = homeo.jac_forward(p);
      require(J.finite(), ErrorCode::SingularityError, "non-finite Jacobian at an undeclared point");
      sum += sigma_max(J) * plane.w(p);
    }
  }
  rep.value = sum * lat.cell_area();
  return rep;
}

/// Same, on an n-cell lattice over the source domain's bounding box.
inline VariationReport exact_variation(const HomeoSpec& homeo, const WeightedPlane& plane, std::size_t n) {
  return exact_variation(homeo, plane, Lattice::over(homeo.source.bbox, n));
}

enum class SliceAxis { X, Y };  // X: lines {x = const}, parametrized by y

struct SliceResult {
  double slice_integral = 0.0;
  double full_variation = 0.0;
  double tolerance = 0.05;
  bool holds() const { return slice_integral <= full_variation * (1.0 + tolerance); }
};

/// Σ over lattice lines of the length of the image polyline, times spacing.
inline double slice_integral(const MapField& map, SliceAxis axis) {
  const Lattice& lat = map.lattice();
  double total = 0.0;
  if (axis == SliceAxis::X) {
    for (std::size_t i = 0; i < lat.nx; ++i)
      for (std::size_t j = 0; j + 1 < lat.ny; ++j) total += distance(map.at(i, j), map.at(i, j + 1));
  } else {
    for (std::size_t j = 0; j < lat.ny; ++j)
      for (std::size_t i = 0; i + 1 < lat.nx; ++i) total += distance(map.at(i, j), map.at(i + 1, j));
  }
  return total * lat.spacing;
}

inline SliceResult slice_variation(const MapField& map, const WeightedPlane& plane, SliceAxis axis,
                                   double tolerance = 0.05) {
  return {slice_integral(map, axis), exact_variation(map, plane).value, tolerance};
}

/// Slices of an analytic map sampled on a rectangular lattice; the full
/// variation uses the analytic Jacobian on the same nodes.
inline SliceResult slice_variation(const HomeoSpec& homeo, const WeightedPlane& plane, const Lattice& lat,
                                   SliceAxis axis, double tolerance = 0.05) {
  HomeoSpec boxed = homeo;
  boxed.source = Domain::box(lat.window());
  return {slice_integral(MapField::sample(lat, homeo.forward), axis), exact_variation(boxed, plane, lat).value,
          tolerance};
}

}  // namespace bvlab
