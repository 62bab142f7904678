#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"
#include "bvlab/grid.hpp"

namespace bvlab {

namespace detail {

// Squared distance transform of a sampled function along one line
// (lower envelope of parabolas).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<long>& v, std::vector<double>& z) {
  const long n = static_cast<long>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  long k = -1;
  const auto cross = [&](long q, long p) {
    return ((f[q] + double(q) * double(q)) - (f[p] + double(p) * double(p))) / (2.0 * double(q - p));
  };
  for (long q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = cross(q, v[k]);
    while (s <= z[k]) s = cross(q, v[--k]);
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  long j = 0;
  for (long q = 0; q < n; ++q) {
    while (z[j + 1] < double(q)) ++j;
    const double dq = double(q - v[j]);
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace detail

/// Exact Euclidean distance from every node to the nearest complement node.
/// Nodes just outside the lattice count as complement. Zero on the complement.
inline GridField distance_to_complement(const IndicatorSet& set) {
  const Lattice& lat = set.lattice;
  const std::size_t W = lat.nx + 2, H = lat.ny + 2;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(W * H, 0.0);
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i)
      g[(j + 1) * W + (i + 1)] = set.mask[lat.index(i, j)] ? inf : 0.0;
  const std::size_t L = std::max(W, H);
  std::vector<double> f(L), d(L), z(L + 1);
  std::vector<long> v(L);
  for (std::size_t i = 0; i < W; ++i) {
    f.resize(H);
    d.resize(H);
    for (std::size_t j = 0; j < H; ++j) f[j] = g[j * W + i];
    detail::edt_1d(f, d, v, z);
    for (std::size_t j = 0; j < H; ++j) g[j * W + i] = d[j];
  }
  for (std::size_t j = 0; j < H; ++j) {
    f.assign(g.begin() + static_cast<long>(j * W), g.begin() + static_cast<long>((j + 1) * W));
    d.resize(W);
    detail::edt_1d(f, d, v, z);
    std::copy(d.begin(), d.end(), g.begin() + static_cast<long>(j * W));
  }
  std::vector<double> out(lat.size());
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i) out[lat.index(i, j)] = std::sqrt(g[(j + 1) * W + (i + 1)]) * lat.spacing;
  return GridField(lat, std::move(out));
}

/// Whitney-type cover of a lattice open set. `vitali` holds the pairwise
/// disjoint balls B_j = B(x_j, r_j) with r_x = min{1, dist(x, complement)/25};
/// `balls` holds the cover 5B_j.
struct BallCover {
  std::vector<Ball> vitali;
  std::vector<Ball> balls;
  IndicatorSet parent_set;
};

inline BallCover build_cover(const IndicatorSet& G) {
  require(!G.empty(), ErrorCode::InvalidArgument, "cannot cover an empty set");
  const Lattice& lat = G.lattice;
  const double h = lat.spacing;
  const GridField dist = distance_to_complement(G);

  struct Candidate {
    double r;
    std::size_t i, j;
  };
  std::vector<Candidate> cand;
  for (std::size_t j = 0; j < lat.ny; ++j)
    for (std::size_t i = 0; i < lat.nx; ++i)
      if (G.at(i, j)) cand.push_back({std::min(1.0, dist.at(i, j) / 25.0), i, j});
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.r != b.r) return a.r > b.r;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<double> chosen(lat.size(), -1.0);  // selected radius by centre node
  BallCover cover;
  cover.parent_set = G;
  const auto nx = static_cast<long>(lat.nx), ny = static_cast<long>(lat.ny);
  for (const Candidate& c : cand) {
    const Point x = lat.node(c.i, c.j);
    // A selected ball meeting B(x, r) has its centre within 2r·25/24 of x.
    const long R = static_cast<long>(std::ceil(2.0 * c.r * 25.0 / 24.0 / h)) + 1;
    bool free = true;
    for (long dj = -R; dj <= R && free; ++dj)
      for (long di = -R; di <= R; ++di) {
        const long a = static_cast<long>(c.i) + di, b = static_cast<long>(c.j) + dj;
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const auto k = lat.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        if (chosen[k] < 0.0) continue;
        if (distance(x, lat.node(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) < c.r + chosen[k]) {
          free = false;
          break;
        }
      }
    if (!free) continue;
    chosen[lat.index(c.i, c.j)] = c.r;
    cover.vitali.push_back({x, c.r});
    cover.balls.push_back({x, 5.0 * c.r});
  }
  return cover;
}

/// Exact pairwise test: no two Vitali balls overlap (tangency allowed).
inline bool vitali_disjoint(const BallCover& cover) {
  std::vector<Ball> b = cover.vitali;
  std::sort(b.begin(), b.end(), [](const Ball& p, const Ball& q) { return p.center.x < q.center.x; });
  double rmax = 0.0;
  for (const Ball& x : b) rmax = std::max(rmax, x.radius);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size() && b[j].center.x - b[i].center.x < b[i].radius + rmax; ++j)
      if (distance(b[i].center, b[j].center) < b[i].radius + b[j].radius) return false;
  return true;
}

/// Per-node count of the dilated Vitali balls λB_j that contain the node.
inline std::vector<std::size_t> multiplicity(const BallCover& cover, double dilation,
                                             std::vector<double>* rmin = nullptr, std::vector<double>* rmax = nullptr) {
  const Lattice& lat = cover.parent_set.lattice;
  const double h = lat.spacing;
  std::vector<std::size_t> count(lat.size(), 0);
  if (rmin) rmin->assign(lat.size(), std::numeric_limits<double>::infinity());
  if (rmax) rmax->assign(lat.size(), 0.0);
  const auto nx = static_cast<long>(lat.nx), ny = static_cast<long>(lat.ny);
  for (const Ball& b : cover.vitali) {
    const double R = dilation * b.radius;
    const Point s = lat.to_index_space(b.center);
    const long i0 = std::max(0L, static_cast<long>(std::floor(s.x - R / h)));
    const long i1 = std::min(nx - 1, static_cast<long>(std::ceil(s.x + R / h)));
    const long j0 = std::max(0L, static_cast<long>(std::floor(s.y - R / h)));
    const long j1 = std::min(ny - 1, static_cast<long>(std::ceil(s.y + R / h)));
    for (long j = j0; j <= j1; ++j)
      for (long i = i0; i <= i1; ++i) {
        const auto k = lat.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (distance(lat.node(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), b.center) >= R) continue;
        ++count[k];
        if (rmin) (*rmin)[k] = std::min((*rmin)[k], b.radius);
        if (rmax) (*rmax)[k] = std::max((*rmax)[k], b.radius);
      }
  }
  return count;
}

struct OverlapReport {
  double dilation = 1.0;
  std::size_t max_multiplicity = 0;  // over nodes of the set
  std::size_t min_multiplicity = 0;
  double radius_ratio = 1.0;  // largest r_i / r_j among dilates sharing a node
};

/// Overlap of the dilates λB_j of the Vitali balls on the nodes of the set.
/// The cover balls are 5B_j, so λ = 5 counts the cover itself and λ = 20
/// its 4-dilates.
inline OverlapReport overlap_bound(const BallCover& cover, double dilation) {
  require(dilation >= 1.0, ErrorCode::InvalidArgument, "dilation must be at least 1");
  std::vector<double> rmin, rmax;
  const auto count = multiplicity(cover, dilation, &rmin, &rmax);
  const IndicatorSet& G = cover.parent_set;
  OverlapReport rep;
  rep.dilation = dilation;
  rep.min_multiplicity = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < count.size(); ++k) {
    if (!G.mask[k]) continue;
    rep.max_multiplicity = std::max(rep.max_multiplicity, count[k]);
    rep.min_multiplicity = std::min(rep.min_multiplicity, count[k]);
    if (count[k] > 0) rep.radius_ratio = std::max(rep.radius_ratio, rmax[k] / rmin[k]);
  }
  return rep;
}

/// Every node inside λB_j (for each j) belongs to the set.
inline bool dilates_inside(const BallCover& cover, double dilation) {
  const auto count = multiplicity(cover, dilation);
  for (std::size_t k = 0; k < count.size(); ++k)
    if (count[k] > 0 && !cover.parent_set.mask[k]) return false;
  return true;
}

}  // namespace bvlab
