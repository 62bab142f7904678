#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "bvlab/contour.hpp"
#include "bvlab/error.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/report.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

/// Pointwise slope of a lattice field: the larger of the steepest
/// 8-neighbour difference quotient and the central-difference gradient norm.
inline GridField discrete_lip(const GridField& field) {
  const Lattice& lat = field.lattice;
  const double h = lat.spacing;
  const auto nx = static_cast<long>(lat.nx), ny = static_cast<long>(lat.ny);
  std::vector<double> out(lat.size(), 0.0);
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const double f0 = field.at(i, j);
      double best = 0.0;
      for (long dj = -1; dj <= 1; ++dj) {
        for (long di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const long a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
          const double dist = (di != 0 && dj != 0) ? h * std::sqrt(2.0) : h;
          best = std::max(best, std::abs(field.at(a, b) - f0) / dist);
        }
      }
      const long il = std::max(0L, i - 1), ir = std::min(nx - 1, i + 1);
      const long jl = std::max(0L, j - 1), jr = std::min(ny - 1, j + 1);
      const double gx = (field.at(ir, j) - field.at(il, j)) / (h * static_cast<double>(ir - il));
      const double gy = (field.at(i, jr) - field.at(i, jl)) / (h * static_cast<double>(jr - jl));
      out[lat.index(i, j)] = std::max(best, std::hypot(gx, gy));
    }
  }
  return GridField(lat, std::move(out));
}

namespace detail {

inline bool lattice_inside_plane(const Lattice& lat, const WeightedPlane& plane) {
  const Rect lw = lat.window();
  const Rect& pw = plane.window();
  const double tol = 1e-9 * std::max(pw.width(), pw.height());
  return lw.xmin >= pw.xmin - tol && lw.xmax <= pw.xmax + tol && lw.ymin >= pw.ymin - tol && lw.ymax <= pw.ymax + tol;
}

struct WeightedSum {
  double value = 0.0;
  std::size_t excluded = 0;
};

// Σ density * w * h² over nodes, skipping singular density nodes.
inline WeightedSum integrate_nodes(const GridField& density, const WeightedPlane& plane, std::size_t stride = 1) {
  const Lattice& lat = density.lattice;
  const double h = lat.spacing * static_cast<double>(stride);
  WeightedSum s;
  for (std::size_t j = 0; j < lat.ny; j += stride) {
    for (std::size_t i = 0; i < lat.nx; i += stride) {
      const Point p = lat.node(i, j);
      const double w = plane.w(p);
      if (plane.is_singular(p, 1e-9 * lat.spacing) || !std::isfinite(w)) {
        ++s.excluded;
        continue;
      }
      s.value += density.at(i, j) * w;
    }
  }
  s.value *= h * h;
  return s;
}

// Separable 5-tap binomial filter (≈ Gaussian with σ = one cell), edge-replicated.
inline GridField binomial_smooth(const GridField& f) {
  static constexpr double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const Lattice& lat = f.lattice;
  const auto nx = static_cast<long>(lat.nx), ny = static_cast<long>(lat.ny);
  std::vector<double> tmp(lat.size()), out(lat.size());
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      double s = 0.0;
      for (long d = -2; d <= 2; ++d) s += k[d + 2] * f.at(std::clamp(i + d, 0L, nx - 1), j);
      tmp[lat.index(i, j)] = s;
    }
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      double s = 0.0;
      for (long d = -2; d <= 2; ++d) s += k[d + 2] * tmp[lat.index(i, std::clamp(j + d, 0L, ny - 1))];
      out[lat.index(i, j)] = s;
    }
  return GridField(lat, std::move(out));
}

}  // namespace detail

/// ∫ lip(f) w dL² by midpoint quadrature over the lattice cells. The error
/// estimate is the change against the stride-2 sub-lattice.
inline VariationReport total_variation(const GridField& field, const WeightedPlane& plane) {
  require(detail::lattice_inside_plane(field.lattice, plane), ErrorCode::InvalidArgument,
          "field window must lie inside the plane window");
  const GridField lip = discrete_lip(field);
  const auto sum = detail::integrate_nodes(lip, plane);
  VariationReport rep;
  rep.value = sum.value;
  rep.excluded_nodes = sum.excluded;
  rep.spacing = field.lattice.spacing;
  rep.resolution = std::max(field.lattice.nx, field.lattice.ny);
  if (field.lattice.nx >= 4 && field.lattice.ny >= 4) {
    const Lattice& lat = field.lattice;
    Lattice coarse{lat.origin, 2.0 * lat.spacing, (lat.nx + 1) / 2, (lat.ny + 1) / 2};
    std::vector<double> vals(coarse.size());
    for (std::size_t j = 0; j < coarse.ny; ++j)
      for (std::size_t i = 0; i < coarse.nx; ++i) vals[coarse.index(i, j)] = field.at(2 * i, 2 * j);
    const GridField cf(coarse, std::move(vals));
    const double coarse_value = detail::integrate_nodes(discrete_lip(cf), plane).value;
    rep.error_estimate = std::abs(rep.value - coarse_value);
  }
  return rep;
}

/// Boundary of a lattice set: the 1/2-isoline of the binomially smoothed
/// indicator.
inline ContourSet boundary_contour(const IndicatorSet& set) {
  return marching_squares(detail::binomial_smooth(set.as_field()), 0.5);
}

/// Weighted boundary length ∫_{∂E ∩ subwindow} w dH¹. An optional `region`
/// predicate restricts further (relative perimeter in an open set).
inline VariationReport perimeter(const IndicatorSet& set, const WeightedPlane& plane,
                                 std::optional<Rect> subwindow = std::nullopt,
                                 const std::function<bool(Point)>& region = {}) {
  VariationReport rep;
  rep.spacing = set.lattice.spacing;
  rep.resolution = std::max(set.lattice.nx, set.lattice.ny);
  if (subwindow)
    require(set.lattice.window().contains(*subwindow), ErrorCode::InvalidArgument,
            "subwindow must lie inside the lattice window");
  if (set.empty() || set.full()) {
    rep.degenerate = true;
    return rep;
  }
  const ContourSet cs = boundary_contour(set);
  rep.value = weighted_length(cs, plane, [&](Point m) {
    if (subwindow && !subwindow->contains(m)) return false;
    return !region || region(m);
  });
  return rep;
}

/// Perimeter in the lattice edge model: every pair of 4-neighbours with
/// different membership contributes w(edge midpoint) * spacing.
inline double edge_perimeter(const IndicatorSet& set, const WeightedPlane& plane) {
  const Lattice& lat = set.lattice;
  double sum = 0.0;
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) {
      if (i + 1 < lat.nx && set.at(i, j) != set.at(i + 1, j))
        sum += plane.w(0.5 * (lat.node(i, j) + lat.node(i + 1, j)));
      if (j + 1 < lat.ny && set.at(i, j) != set.at(i, j + 1))
        sum += plane.w(0.5 * (lat.node(i, j) + lat.node(i, j + 1)));
    }
  return sum * lat.spacing;
}

struct SubmodularityResult {
  double lhs = 0.0;  // Per(E∩F) + Per(E∪F)
  double rhs = 0.0;  // Per(E) + Per(F)
  // Twice the weighted length of edges cut by both sets with opposite
  // orientation; rhs − lhs equals this up to rounding.
  double defect = 0.0;
  std::size_t opposed_edges = 0;
};

/// Both sides of Per(E∩F) + Per(E∪F) ≤ Per(E) + Per(F) in the edge model.
/// Equality holds exactly when no edge is cut by E and F in opposite
/// directions.
inline SubmodularityResult submodularity_check(const IndicatorSet& E, const IndicatorSet& F,
                                               const WeightedPlane& plane) {
  require(E.lattice.same_as(F.lattice), ErrorCode::InvalidArgument, "masks live on different lattices");
  const Lattice& lat = E.lattice;
  auto cut = [](bool a, bool b) { return a != b ? 1 : 0; };
  SubmodularityResult r;
  auto edge = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const bool e0 = E.at(i0, j0), e1 = E.at(i1, j1), f0 = F.at(i0, j0), f1 = F.at(i1, j1);
    const int left = cut(e0 && f0, e1 && f1) + cut(e0 || f0, e1 || f1);
    const int right = cut(e0, e1) + cut(f0, f1);
    const double w = plane.w(0.5 * (lat.node(i0, j0) + lat.node(i1, j1)));
    r.lhs += left * w;
    r.rhs += right * w;
    if (right - left != 0) {
      r.defect += (right - left) * w;
      ++r.opposed_edges;
    }
  };
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) {
      if (i + 1 < lat.nx) edge(i, j, i + 1, j);
      if (j + 1 < lat.ny) edge(i, j, i, j + 1);
    }
  r.lhs *= lat.spacing;
  r.rhs *= lat.spacing;
  r.defect *= lat.spacing;
  return r;
}

/// Levels for coarea-type quadratures: midpoints of `count` equal bins over
/// [min + η₋, max − η₊], where η± is the largest 4-neighbour difference at a
/// node attaining the extreme (one cell of oscillation there). Each level
/// carries weight (max − min)/count, so the sum still spans the full range.
struct LevelGrid {
  std::vector<double> levels;
  double step = 0.0;  // quadrature weight per level
};

inline LevelGrid interior_levels(const GridField& field, std::size_t count) {
  require(count >= 1, ErrorCode::InvalidArgument, "need at least one level sample");
  const Lattice& lat = field.lattice;
  const double fmin = field.min(), fmax = field.max();
  double eta_lo = 0.0, eta_hi = 0.0;
  const auto visit = [&](double a, double b) {
    const double d = std::abs(a - b);
    if (a == fmin || b == fmin) eta_lo = std::max(eta_lo, d);
    if (a == fmax || b == fmax) eta_hi = std::max(eta_hi, d);
  };
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) {
      if (i + 1 < lat.nx) visit(field.at(i, j), field.at(i + 1, j));
      if (j + 1 < lat.ny) visit(field.at(i, j), field.at(i, j + 1));
    }
  LevelGrid g;
  const double lo = fmin + eta_lo, hi = fmax - eta_hi;
  if (!(hi > lo)) return g;
  g.step = (fmax - fmin) / static_cast<double>(count);
  const double bin = (hi - lo) / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) g.levels.push_back(lo + (static_cast<double>(k) + 0.5) * bin);
  return g;
}

struct CoareaResult {
  double lhs = 0.0;  // total variation
  double rhs = 0.0;  // ∫ Per({f > t}) dt
  std::vector<double> levels;
  std::vector<double> perimeters;

  double relative_gap() const {
    const double s = std::max(std::abs(lhs), std::abs(rhs));
    return s > 0 ? std::abs(lhs - rhs) / s : 0.0;
  }
};

inline CoareaResult coarea_check(const GridField& field, const WeightedPlane& plane, std::size_t level_samples) {
  CoareaResult r;
  if (field.max() == field.min()) return r;
  r.lhs = total_variation(field, plane).value;
  const LevelGrid g = interior_levels(field, level_samples);
  for (double t : g.levels) {
    const double per = weighted_length(marching_squares(field, t), plane);
    r.levels.push_back(t);
    r.perimeters.push_back(per);
    r.rhs += per * g.step;
  }
  return r;
}

struct LengthBudget {
  double lhs = 0.0;  // ∫ H¹({f = t}) dt
  double rhs = 0.0;  // ∫ lip(f) dm
  double ratio() const { return rhs > 0 ? lhs / rhs : 0.0; }
};

inline LengthBudget levelset_length_budget(const GridField& field, const WeightedPlane& plane,
                                           std::size_t level_samples) {
  LengthBudget b;
  if (field.max() == field.min()) return b;
  b.rhs = total_variation(field, plane).value;
  const LevelGrid g = interior_levels(field, level_samples);
  for (double t : g.levels) b.lhs += contour_length(marching_squares(field, t)) * g.step;
  return b;
}

}  // namespace bvlab
