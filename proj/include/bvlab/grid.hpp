#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"

namespace bvlab {

/// Uniform isotropic lattice of cell-centred nodes.
///
/// Node (i, j) sits at origin + (i*spacing, j*spacing) and represents the
/// square cell of side `spacing` around it, so the lattice window extends
/// half a cell beyond the outermost nodes. Storage is row-major in j.
struct Lattice {
  Point origin;
  double spacing = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  /// Lattice with `n` cells along the wider side of `window`.
  static Lattice over(const Rect& window, std::size_t n) {
    require(window.valid(), ErrorCode::InvalidArgument, "lattice window must have positive size");
    require(n >= 2, ErrorCode::InvalidArgument, "lattice needs at least 2 cells per side");
    const double h = std::max(window.width(), window.height()) / static_cast<double>(n);
    Lattice lat;
    lat.spacing = h;
    lat.nx = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(window.width() / h)));
    lat.ny = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(window.height() / h)));
    const Point c = window.center();
    lat.origin = {c.x - 0.5 * h * static_cast<double>(lat.nx - 1),
                  c.y - 0.5 * h * static_cast<double>(lat.ny - 1)};
    return lat;
  }

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  Point node(std::size_t i, std::size_t j) const {
    return {origin.x + spacing * static_cast<double>(i), origin.y + spacing * static_cast<double>(j)};
  }
  double cell_area() const { return spacing * spacing; }

  Rect window() const {
    return {origin.x - 0.5 * spacing, origin.y - 0.5 * spacing,
            origin.x + (static_cast<double>(nx) - 0.5) * spacing,
            origin.y + (static_cast<double>(ny) - 0.5) * spacing};
  }

  /// Rectangle spanned by the node centres (the marching-squares domain).
  Rect node_hull() const {
    return {origin.x, origin.y, origin.x + spacing * static_cast<double>(nx - 1),
            origin.y + spacing * static_cast<double>(ny - 1)};
  }

  /// Continuous lattice coordinates of p.
  Point to_index_space(Point p) const {
    return {(p.x - origin.x) / spacing, (p.y - origin.y) / spacing};
  }

  bool same_as(const Lattice& o) const {
    return nx == o.nx && ny == o.ny && spacing == o.spacing && origin == o.origin;
  }

  void validate() const {
    require(nx >= 2 && ny >= 2, ErrorCode::InvalidArgument, "lattice dimensions must be at least 2x2");
    require(spacing > 0.0 && std::isfinite(spacing), ErrorCode::InvalidArgument, "lattice spacing must be positive");
  }
};

/// Scalar field sampled at lattice nodes.
struct GridField {
  Lattice lattice;
  std::vector<double> values;

  GridField() = default;
  GridField(Lattice lat, std::vector<double> vals) : lattice(lat), values(std::move(vals)) {
    lattice.validate();
    require(values.size() == lattice.size(), ErrorCode::InvalidArgument, "field size does not match lattice");
    for (double v : values) require(std::isfinite(v), ErrorCode::InvalidArgument, "field values must be finite");
  }

  static GridField sample(const Lattice& lat, const std::function<double(Point)>& fn) {
    std::vector<double> vals(lat.size());
    for (std::size_t j = 0; j < lat.ny; ++j)
      for (std::size_t i = 0; i < lat.nx; ++i) vals[lat.index(i, j)] = fn(lat.node(i, j));
    return GridField(lat, std::move(vals));
  }

  static GridField constant(const Lattice& lat, double c) {
    return GridField(lat, std::vector<double>(lat.size(), c));
  }

  double at(std::size_t i, std::size_t j) const { return values[lattice.index(i, j)]; }
  double& at(std::size_t i, std::size_t j) { return values[lattice.index(i, j)]; }

  /// Bilinear interpolation, clamped to the node hull.
  double interpolate(Point p) const {
    const Point q = lattice.to_index_space(p);
    const double fx = std::clamp(q.x, 0.0, static_cast<double>(lattice.nx - 1));
    const double fy = std::clamp(q.y, 0.0, static_cast<double>(lattice.ny - 1));
    const std::size_t i0 = std::min(static_cast<std::size_t>(fx), lattice.nx - 2);
    const std::size_t j0 = std::min(static_cast<std::size_t>(fy), lattice.ny - 2);
    const double tx = fx - static_cast<double>(i0);
    const double ty = fy - static_cast<double>(j0);
    return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) +
           (1 - tx) * ty * at(i0, j0 + 1) + tx * ty * at(i0 + 1, j0 + 1);
  }

  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
};

/// Boolean mask on a lattice (the indicator of a set).
struct IndicatorSet {
  Lattice lattice;
  std::vector<std::uint8_t> mask;

  IndicatorSet() = default;
  IndicatorSet(Lattice lat, std::vector<std::uint8_t> m) : lattice(lat), mask(std::move(m)) {
    lattice.validate();
    require(mask.size() == lattice.size(), ErrorCode::InvalidArgument, "mask size does not match lattice");
  }

  static IndicatorSet from_predicate(const Lattice& lat, const std::function<bool(Point)>& inside) {
    std::vector<std::uint8_t> m(lat.size());
    for (std::size_t j = 0; j < lat.ny; ++j)
      for (std::size_t i = 0; i < lat.nx; ++i) m[lat.index(i, j)] = inside(lat.node(i, j)) ? 1 : 0;
    return IndicatorSet(lat, std::move(m));
  }

  bool at(std::size_t i, std::size_t j) const { return mask[lattice.index(i, j)] != 0; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto v : mask) n += v ? 1 : 0;
    return n;
  }
  bool empty() const { return count() == 0; }
  bool full() const { return count() == mask.size(); }

  GridField as_field() const {
    std::vector<double> vals(mask.begin(), mask.end());
    return GridField(lattice, std::move(vals));
  }
};

}  // namespace bvlab
