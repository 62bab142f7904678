#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "bvlab/bv_scalar.hpp"
#include "bvlab/contour.hpp"
#include "bvlab/curves.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

/// Weighted disk average of χ_A at radius r: u(x) = ∫_{B_r(x)} χ_A w / ∫_{B_r(x)} w,
/// summed over nodes strictly inside the disk.
inline GridField mollify_indicator(const IndicatorSet& region, const WeightedPlane& plane, double r) {
  const Lattice& lat = region.lattice;
  const double h = lat.spacing;
  require(r >= 2.0 * h * (1.0 - 1e-12), ErrorCode::InvalidArgument, "mollification radius below two lattice spacings");
  require(detail::lattice_inside_plane(lat, plane), ErrorCode::InvalidArgument, "region lattice must lie in the plane window");
  const auto nx = static_cast<long>(lat.nx), ny = static_cast<long>(lat.ny);
  const Rect win = lat.window();
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const auto n = lat.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const bool edge = (i + 1 < nx && region.mask[n + 1] != region.mask[n]) ||
                        (j + 1 < ny && region.mask[n + lat.nx] != region.mask[n]);
      if (edge)
        require(win.contains_disk(lat.node(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), r),
                ErrorCode::PreconditionViolated, "mollification band around the boundary leaves the window");
    }

  const long R = static_cast<long>(std::ceil(r / h));
  std::vector<std::pair<long, long>> stencil;
  for (long dj = -R; dj <= R; ++dj)
    for (long di = -R; di <= R; ++di)
      if (std::hypot(static_cast<double>(di), static_cast<double>(dj)) * h < r) stencil.emplace_back(di, dj);

  std::vector<double> w(lat.size());
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) {
      const Point p = lat.node(i, j);
      w[lat.index(i, j)] = plane.is_singular(p, 1e-12 * h) ? 0.0 : plane.w(p);
    }
  std::vector<double> u(lat.size());
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      double num = 0.0, den = 0.0;
      for (const auto& [di, dj] : stencil) {
        const long a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const auto k = lat.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        den += w[k];
        if (region.mask[k]) num += w[k];
      }
      u[lat.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))] = den > 0.0 ? num / den : 0.0;
    }
  return GridField(lat, std::move(u));
}

struct LevelChoice {
  double level = 0.0;
  double length = 0.0;  // weighted length of the chosen contour
  std::vector<double> levels;
  std::vector<double> lengths;

  double mean_length() const {
    return lengths.empty() ? 0.0 : std::accumulate(lengths.begin(), lengths.end(), 0.0) / static_cast<double>(lengths.size());
  }
};

/// Scan `count` equispaced levels in (δ, 1 − δ) and keep the one whose contour
/// is shortest in weighted length (lowest level on ties).
inline LevelChoice select_level(const GridField& u, const WeightedPlane& plane, std::size_t count = 16,
                                double delta = 0.1) {
  require(count >= 1 && delta >= 0.0 && delta < 0.5, ErrorCode::InvalidArgument, "bad level grid");
  require(u.max() > u.min(), ErrorCode::DegenerateField, "constant field has no level sets");
  LevelChoice c;
  bool any = false;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const double t = delta + (1.0 - 2.0 * delta) * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const ContourSet cs = marching_squares(u, t);
    const double len = weighted_length(cs, plane);
    c.levels.push_back(t);
    c.lengths.push_back(len);
    if (cs.segments.empty()) continue;
    any = true;
    if (len < best) {
      best = len;
      c.level = t;
      c.length = len;
    }
  }
  require(any, ErrorCode::DegenerateField, "every scanned level set is empty");
  return c;
}

struct SeparatingComponent {
  std::vector<PolylineCurve> curves;  // the component's marching-squares chains
  std::vector<std::size_t> cells;
  std::size_t component_count = 0;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline std::size_t cell_of(const Lattice& lat, Point p) {
  const Point s = lat.to_index_space(p);
  const auto clampc = [](double v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(std::floor(v), 0.0, static_cast<double>(n - 2)));
  };
  return clampc(s.y, lat.ny) * (lat.nx - 1) + clampc(s.x, lat.nx);
}

}  // namespace detail

/// The 8-connected component of contour cells whose removal 4-disconnects the
/// cell containing P from the cell containing Q.
inline SeparatingComponent separating_component(const ContourSet& cs, Point P, Point Q) {
  const Lattice& lat = cs.lattice;
  const std::size_t cx = lat.nx - 1, cy = lat.ny - 1, ncell = cx * cy;
  std::vector<char> crossed(ncell, 0);
  for (const auto& s : cs.segments) crossed[s.cell] = 1;
  detail::UnionFind uf(ncell);
  for (std::size_t j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i) {
      const std::size_t c = j * cx + i;
      if (!crossed[c]) continue;
      if (i + 1 < cx && crossed[c + 1]) uf.unite(c, c + 1);
      if (j + 1 < cy && crossed[c + cx]) uf.unite(c, c + cx);
      if (i + 1 < cx && j + 1 < cy && crossed[c + cx + 1]) uf.unite(c, c + cx + 1);
      if (i > 0 && j + 1 < cy && crossed[c + cx - 1]) uf.unite(c, c + cx - 1);
    }
  std::vector<std::size_t> roots;
  for (std::size_t c = 0; c < ncell; ++c)
    if (crossed[c] && uf.find(c) == c) roots.push_back(c);

  SeparatingComponent out;
  out.component_count = roots.size();
  const std::size_t cp = detail::cell_of(lat, P), cq = detail::cell_of(lat, Q);
  std::vector<char> seen(ncell);
  std::vector<std::size_t> stack;
  for (std::size_t root : roots) {
    const auto member = [&](std::size_t c) { return crossed[c] && uf.find(c) == root; };
    if (member(cp) || member(cq)) continue;
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, cp);
    seen[cp] = 1;
    bool reached = false;
    while (!stack.empty() && !reached) {
      const std::size_t c = stack.back();
      stack.pop_back();
      if (c == cq) reached = true;
      const std::size_t i = c % cx, j = c / cx;
      const auto push = [&](std::size_t d) {
        if (!seen[d] && !member(d)) {
          seen[d] = 1;
          stack.push_back(d);
        }
      };
      if (i > 0) push(c - 1);
      if (i + 1 < cx) push(c + 1);
      if (j > 0) push(c - cx);
      if (j + 1 < cy) push(c + cx);
    }
    if (reached) continue;
    for (std::size_t c = 0; c < ncell; ++c)
      if (member(c)) out.cells.push_back(c);
    for (std::size_t k = 0; k < cs.chains.size(); ++k)
      if (!cs.chain_cells[k].empty() && member(cs.chain_cells[k].front())) out.curves.push_back(cs.chains[k]);
    return out;
  }
  std::string sizes;
  for (std::size_t root : roots) {
    std::size_t n = 0;
    for (std::size_t c = 0; c < ncell; ++c) n += crossed[c] && uf.find(c) == root;
    sizes += (sizes.empty() ? "" : ", ") + std::to_string(n);
  }
  throw Error(ErrorCode::SeparationFailure,
              "no level-set component separates the markers; component cell counts: [" + sizes + "]");
}

/// A Jordan region: its boundary curve and a fast membership test.
struct JordanRegion {
  std::string name;
  PolylineCurve boundary;
  std::function<bool(Point)> inside;
};

inline JordanRegion disk_region(Point c, double radius, std::size_t samples = 4096) {
  return {"disk", circle_curve(c, radius, samples), [=](Point p) { return distance(p, c) < radius; }};
}

inline JordanRegion square_region(Point c, double side, std::size_t per_side = 1024) {
  const double s = 0.5 * side;
  return {"square", square_curve(c, side, per_side),
          [=](Point p) { return std::abs(p.x - c.x) < s && std::abs(p.y - c.y) < s; }};
}

inline JordanRegion ellipse_region(Point c, double a, double b, std::size_t samples = 4096) {
  return {"ellipse", ellipse_curve(c, a, b, samples), [=](Point p) {
            const double x = (p.x - c.x) / a, y = (p.y - c.y) / b;
            return x * x + y * y < 1.0;
          }};
}

struct PipelineConfig {
  std::size_t resolution = 512;
  Rect window{-1.0, -1.0, 1.0, 1.0};
  double domain_radius = 1.0;  // D is the disk of this radius about the window centre
  std::vector<double> radii_in_spacings{6.0, 4.0, 2.0};
  std::size_t level_count = 16;
  double delta = 0.1;
  Point marker_inside{0.0, 0.0};
  Point marker_outside{0.0, 0.85};
  double constant = 4.0;
};

struct PipelineStage {
  double radius = 0.0;
  double level = 0.0;
  double level_length = 0.0;        // weighted length of the selected contour
  double mean_level_length = 0.0;   // average over the scanned levels
  double lipschitz_budget = 0.0;    // ∫ lip(u) w
  double component_length = 0.0;    // H¹ of the extracted component
  double hausdorff = 0.0;           // to the target curve
  bool markers_clear = false;
  std::vector<PolylineCurve> component;
};

struct PipelineRun {
  std::string region_name;
  PolylineCurve target_curve;
  IndicatorSet region;
  double spacing = 0.0;
  double region_perimeter = 0.0;  // Per(A, D)
  double constant = 4.0;
  Point marker_inside, marker_outside;
  std::vector<PipelineStage> stages;

  std::vector<double> moll_radii() const {
    std::vector<double> r;
    for (const auto& s : stages) r.push_back(s.radius);
    return r;
  }
  std::vector<double> levels() const {
    std::vector<double> t;
    for (const auto& s : stages) t.push_back(s.level);
    return t;
  }
};

/// Mollify, select a level and extract the separating component at every
/// configured radius, from coarse to fine.
inline PipelineRun run_pipeline(const JordanRegion& region, const WeightedPlane& plane, const PipelineConfig& cfg = {}) {
  const Lattice lat = Lattice::over(cfg.window, cfg.resolution);
  const double h = lat.spacing;
  const Point o = cfg.window.center();
  const auto in_D = [o, R = cfg.domain_radius](Point p) { return distance(p, o) < R; };
  require(region.inside(cfg.marker_inside) && !region.inside(cfg.marker_outside) && in_D(cfg.marker_outside),
          ErrorCode::PreconditionViolated, "markers must lie inside A and inside D \\ A");
  for (std::size_t k = 1; k < cfg.radii_in_spacings.size(); ++k)
    require(cfg.radii_in_spacings[k] < cfg.radii_in_spacings[k - 1], ErrorCode::InvalidArgument,
            "mollification radii must decrease");

  PipelineRun run;
  run.region_name = region.name;
  run.target_curve = region.boundary;
  run.region = IndicatorSet::from_predicate(lat, region.inside);
  run.spacing = h;
  run.constant = cfg.constant;
  run.marker_inside = cfg.marker_inside;
  run.marker_outside = cfg.marker_outside;
  const WeightedPlane lp = plane.with_window(lat.window());
  run.region_perimeter = perimeter(run.region, lp, std::nullopt, in_D).value;

  for (double k : cfg.radii_in_spacings) {
    PipelineStage st;
    st.radius = k * h;
    const GridField u = mollify_indicator(run.region, lp, st.radius);
    st.lipschitz_budget = total_variation(u, lp).value;
    const double uP = u.interpolate(cfg.marker_inside), uQ = u.interpolate(cfg.marker_outside);
    st.markers_clear = uP == 1.0 && uQ == 0.0;
    const LevelChoice choice = select_level(u, lp, cfg.level_count, cfg.delta);
    st.level = choice.level;
    st.level_length = choice.length;
    st.mean_level_length = choice.mean_length();
    const ContourSet cs = marching_squares(u, choice.level);
    st.component = separating_component(cs, cfg.marker_inside, cfg.marker_outside).curves;
    st.component_length = total_length(st.component);
    st.hausdorff = hausdorff_distance(st.component, {run.target_curve}, 0.25 * h);
    run.stages.push_back(std::move(st));
  }
  return run;
}

struct GolabReport {
  double h1_gamma = 0.0;
  double min_component_length = 0.0;
  double final_hausdorff = 0.0;
  double spacing = 0.0;
  double tolerance = 0.05;
  bool hausdorff_decreasing = false;
  bool hausdorff_fine = false;  // below two spacings at the finest stage
  bool golab_inequality = false;
  bool stage_bounds = false;    // every stage within constant · Per(A, D)
  bool markers_clear = false;

  bool passes() const { return hausdorff_decreasing && hausdorff_fine && golab_inequality && stage_bounds && markers_clear; }
};

/// Verify the limit inequality H¹(γ) ≤ C Per(A, D) along a pipeline run.
/// A Hausdorff distance increasing by more than half a spacing between stages
/// is a convergence failure.
inline GolabReport golab_check(const PipelineRun& run, double tolerance = 0.05) {
  require(run.stages.size() >= 3, ErrorCode::PreconditionViolated, "need at least three pipeline stages");
  GolabReport rep;
  rep.spacing = run.spacing;
  rep.tolerance = tolerance;
  rep.h1_gamma = length(run.target_curve);
  rep.min_component_length = std::numeric_limits<double>::infinity();
  rep.hausdorff_decreasing = true;
  rep.stage_bounds = true;
  rep.markers_clear = true;
  for (std::size_t k = 0; k < run.stages.size(); ++k) {
    const auto& s = run.stages[k];
    if (k > 0 && s.hausdorff > run.stages[k - 1].hausdorff + 0.5 * run.spacing)
      throw Error(ErrorCode::ConvergenceFailure, "Hausdorff distance to the target curve grows between stages");
    if (k > 0 && s.hausdorff > run.stages[k - 1].hausdorff) rep.hausdorff_decreasing = false;
    rep.min_component_length = std::min(rep.min_component_length, s.component_length);
    rep.stage_bounds = rep.stage_bounds && s.component_length <= run.constant * run.region_perimeter;
    rep.markers_clear = rep.markers_clear && s.markers_clear;
  }
  rep.final_hausdorff = run.stages.back().hausdorff;
  rep.hausdorff_fine = rep.final_hausdorff < 2.0 * run.spacing;
  rep.golab_inequality = rep.h1_gamma <= rep.min_component_length * (1.0 + tolerance);
  return rep;
}

}  // namespace bvlab
