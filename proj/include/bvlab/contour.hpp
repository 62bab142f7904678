#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "bvlab/curves.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

struct ContourSegment {
  Point a, b;
  std::size_t cell = 0;  // j * (nx - 1) + i of the 2x2 node block
  std::uint64_t key_a = 0, key_b = 0;  // lattice edges carrying the endpoints
};

/// Isoline {f = level} of a lattice field, as raw segments and as chains
/// joined through shared lattice edges.
struct ContourSet {
  Lattice lattice;
  double level = 0.0;
  std::vector<ContourSegment> segments;
  std::vector<PolylineCurve> chains;
  std::vector<std::vector<std::size_t>> chain_cells;

  std::size_t cells_x() const { return lattice.nx - 1; }
  std::size_t cells_y() const { return lattice.ny - 1; }
  bool empty() const { return segments.empty(); }
};

namespace detail {

inline std::uint64_t h_edge_key(const Lattice& lat, std::size_t i, std::size_t j) {
  return 2 * static_cast<std::uint64_t>(lat.index(i, j));
}
inline std::uint64_t v_edge_key(const Lattice& lat, std::size_t i, std::size_t j) {
  return 2 * static_cast<std::uint64_t>(lat.index(i, j)) + 1;
}

inline void assemble_chains(ContourSet& cs) {
  const auto& segs = cs.segments;
  std::unordered_map<std::uint64_t, std::array<std::size_t, 2>> incident;
  std::unordered_map<std::uint64_t, int> degree;
  incident.reserve(2 * segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::uint64_t k : {segs[s].key_a, segs[s].key_b}) {
      int& d = degree[k];
      if (d < 2) incident[k][d] = s;
      ++d;
    }
  }
  std::vector<bool> used(segs.size(), false);

  auto walk = [&](std::size_t first, std::uint64_t start_key) {
    PolylineCurve chain;
    std::vector<std::size_t> cells;
    std::uint64_t key = start_key;
    std::size_t s = first;
    chain.points.push_back(segs[s].key_a == key ? segs[s].a : segs[s].b);
    while (true) {
      used[s] = true;
      cells.push_back(segs[s].cell);
      const bool forward = segs[s].key_a == key;
      chain.points.push_back(forward ? segs[s].b : segs[s].a);
      key = forward ? segs[s].key_b : segs[s].key_a;
      if (degree[key] != 2) break;
      const auto& inc = incident[key];
      const std::size_t next = inc[0] == s ? inc[1] : inc[0];
      if (used[next]) break;
      s = next;
    }
    chain.closed = key == start_key && chain.points.size() > 2;
    if (chain.closed) chain.points.back() = chain.points.front();
    cs.chains.push_back(std::move(chain));
    cs.chain_cells.push_back(std::move(cells));
  };

  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    if (degree[segs[s].key_a] == 1) walk(s, segs[s].key_a);
    else if (degree[segs[s].key_b] == 1) walk(s, segs[s].key_b);
  }
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) walk(s, segs[s].key_a);
}

}  // namespace detail

/// Marching squares with linear edge interpolation. Ambiguous saddle cells
/// are resolved by the asymptotic decider: the bilinear interpolant's saddle
/// value decides whether the two high corners connect through the centre.
inline ContourSet marching_squares(const GridField& field, double level) {
  const Lattice& lat = field.lattice;
  ContourSet cs;
  cs.lattice = lat;
  cs.level = level;

  for (std::size_t j = 0; j + 1 < lat.ny; ++j) {
    for (std::size_t i = 0; i + 1 < lat.nx; ++i) {
      const double v[4] = {field.at(i, j), field.at(i + 1, j), field.at(i + 1, j + 1), field.at(i, j + 1)};
      const Point p[4] = {lat.node(i, j), lat.node(i + 1, j), lat.node(i + 1, j + 1), lat.node(i, j + 1)};
      int code = 0;
      for (int k = 0; k < 4; ++k)
        if (v[k] > level) code |= 1 << k;
      if (code == 0 || code == 15) continue;

      // Edge e joins corner e and corner (e+1)%4: bottom, right, top, left.
      const std::uint64_t keys[4] = {detail::h_edge_key(lat, i, j), detail::v_edge_key(lat, i + 1, j),
                                     detail::h_edge_key(lat, i, j + 1), detail::v_edge_key(lat, i, j)};
      auto crossing = [&](int e) {
        const int a = e, b = (e + 1) % 4;
        const double t = (level - v[a]) / (v[b] - v[a]);
        return p[a] + t * (p[b] - p[a]);
      };
      const std::size_t cell = j * (lat.nx - 1) + i;
      auto emit = [&](int e0, int e1) { cs.segments.push_back({crossing(e0), crossing(e1), cell, keys[e0], keys[e1]}); };

      if (code == 5 || code == 10) {
        const double denom = v[0] + v[2] - v[1] - v[3];
        const double saddle = denom != 0.0 ? (v[0] * v[2] - v[1] * v[3]) / denom : 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool centre_high = saddle > level;
        if (code == 5) {  // corners 0 and 2 high
          if (centre_high) { emit(0, 1); emit(2, 3); }
          else { emit(3, 0); emit(1, 2); }
        } else {  // corners 1 and 3 high
          if (centre_high) { emit(3, 0); emit(1, 2); }
          else { emit(0, 1); emit(2, 3); }
        }
        continue;
      }
      int found[2], n = 0;
      for (int e = 0; e < 4; ++e) {
        const bool ha = (code >> e) & 1, hb = (code >> ((e + 1) % 4)) & 1;
        if (ha != hb) found[n++] = e;
      }
      emit(found[0], found[1]);
    }
  }
  detail::assemble_chains(cs);
  return cs;
}

// ---------------------------------------------------------------------------
// Weighted lengths
// ---------------------------------------------------------------------------

/// ∫_[a,b] w dH¹ by 3-point Gauss-Legendre (never samples the endpoints).
inline double weighted_segment_length(const WeightedPlane& plane, Point a, Point b) {
  const double len = distance(a, b);
  if (len == 0.0) return 0.0;
  static constexpr double x1 = 0.7745966692414834;  // sqrt(3/5)
  static constexpr double w0 = 8.0 / 9.0, w1 = 5.0 / 9.0;
  const Point m = 0.5 * (a + b), h = 0.5 * (b - a);
  const double s = w0 * plane.w(m) + w1 * (plane.w(m - x1 * h) + plane.w(m + x1 * h));
  return 0.5 * len * s;
}

inline double weighted_length(const PolylineCurve& curve, const WeightedPlane& plane) {
  double L = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k)
    L += weighted_segment_length(plane, curve.points[k - 1], curve.points[k]);
  return L;
}

/// Weighted length of the contour segments whose midpoints satisfy `keep`.
inline double weighted_length(const ContourSet& cs, const WeightedPlane& plane,
                              const std::function<bool(Point)>& keep = {}) {
  double L = 0.0;
  for (const auto& s : cs.segments) {
    if (keep && !keep(0.5 * (s.a + s.b))) continue;
    L += weighted_segment_length(plane, s.a, s.b);
  }
  return L;
}

/// Unweighted length of the contour segments whose midpoints satisfy `keep`.
inline double contour_length(const ContourSet& cs, const std::function<bool(Point)>& keep = {}) {
  double L = 0.0;
  for (const auto& s : cs.segments) {
    if (keep && !keep(0.5 * (s.a + s.b))) continue;
    L += distance(s.a, s.b);
  }
  return L;
}

}  // namespace bvlab
