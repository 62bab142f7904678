#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/bv_scalar.hpp"
#include "bvlab/contour.hpp"
#include "bvlab/curves.hpp"
#include "bvlab/growth.hpp"
#include "bvlab/homeo.hpp"
#include "bvlab/metric_bv.hpp"
#include "bvlab/report.hpp"
#include "bvlab/weighted_plane.hpp"

namespace bvlab {

/// Composite Gauss–Legendre in polar coordinates about the domain's star
/// centre, radially in u = log ρ.
struct PolarQuadrature {
  std::size_t theta_panels = 32;
  std::size_t panels_per_decade = 2;

  PolarQuadrature coarser() const {
    return {std::max<std::size_t>(1, theta_panels / 2), std::max<std::size_t>(1, panels_per_decade / 2)};
  }
};

struct VariationPairConfig {
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  PolarQuadrature quadrature;
  GrowthConfig growth;
};

namespace detail {

using Gauss16 = boost::math::quadrature::gauss<double, 16>;

// Nodes and weights of the 16-point rule on [a, b].
template <class F>
void gauss_panel(double a, double b, F&& visit) {
  const auto& x = Gauss16::abscissa();
  const auto& w = Gauss16::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t k = 0; k < x.size(); ++k) {
    visit(mid - half * x[k], half * w[k]);
    visit(mid + half * x[k], half * w[k]);
  }
}

// ∫_{ρ∈[a,b]} g(ρ) ρ dρ along one ray, composite in log ρ.
inline double radial_piece(const std::function<double(double)>& g, double a, double b, std::size_t per_decade) {
  if (!(b > a)) return 0.0;
  const double ua = std::log(a), ub = std::log(b);
  const auto panels = static_cast<std::size_t>(
      std::max(1.0, std::ceil(static_cast<double>(per_decade) * (ub - ua) / std::log(10.0) - 1e-9)));
  const double du = (ub - ua) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    gauss_panel(ua + du * static_cast<double>(p), ua + du * static_cast<double>(p + 1), [&](double u, double wt) {
      const double rho = std::exp(u);
      sum += wt * g(rho) * rho * rho;
    });
  }
  return sum;
}

/// Cumulative integrals of `density` over Ω ∩ {ρ > ε_k} about dom.star_center,
/// one value per ε (nondecreasing by construction).
inline std::vector<double> annular_values(const std::function<double(Point)>& density, const Domain& dom,
                                          const std::vector<double>& eps, const PolarQuadrature& q) {
  const std::size_t m = eps.size();
  std::vector<double> pieces(m, 0.0);
  const Point c = dom.star_center;
  const double dtheta = 2.0 * kPi / static_cast<double>(q.theta_panels);
  for (std::size_t tp = 0; tp < q.theta_panels; ++tp) {
    gauss_panel(dtheta * static_cast<double>(tp), dtheta * static_cast<double>(tp + 1), [&](double th, double wth) {
      const double rmax = dom.radial_extent(th);
      const Point dir = polar_point(1.0, th);
      const auto g = [&](double rho) {
        const double v = density(c + rho * dir);
        require(std::isfinite(v), ErrorCode::SingularityError, "non-finite variation density off the declared singular set");
        return v;
      };
      for (std::size_t k = 0; k < m; ++k) {
        const double hi = k == 0 ? rmax : std::min(eps[k - 1], rmax);
        pieces[k] += wth * radial_piece(g, eps[k], hi, q.panels_per_decade);
      }
    });
  }
  std::vector<double> out(m);
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) out[k] = acc += pieces[k];
  return out;
}

inline bool window_holds(const Rect& window, const Rect& box) {
  const double tol = 1e-6 * std::max(box.width(), box.height());
  return box.xmin >= window.xmin - tol && box.xmax <= window.xmax + tol && box.ymin >= window.ymin - tol &&
         box.ymax <= window.ymax + tol;
}

inline VariationReport annular_report(const std::function<double(Point)>& density, const Domain& dom,
                                      const VariationPairConfig& cfg) {
  VariationReport rep;
  rep.epsilon_schedule = cfg.eps;
  rep.per_epsilon_values = annular_values(density, dom, cfg.eps, cfg.quadrature);
  rep.value = rep.per_epsilon_values.back();
  rep.resolution = cfg.quadrature.panels_per_decade;
  rep.error_estimate = std::abs(rep.value - annular_values(density, dom, cfg.eps, cfg.quadrature.coarser()).back());
  const GrowthFit fit = classify_growth(cfg.eps, rep.per_epsilon_values, cfg.growth);
  rep.growth_class = fit.growth_class;
  rep.growth_rate = fit.rate;
  rep.growth_exponent = fit.exponent;
  rep.fit_quality = fit.r2;
  rep.infinite = fit.growth_class != GrowthClass::Bounded;
  return rep;
}

}  // namespace detail

/// Forward variation ∫_{G, ρ>ε} σ_max(Df) w_source and inverse variation
/// ∫_{Ω, ρ>ε} σ_max(Df⁻¹) w_target, with ρ measured from the star centre of
/// each domain, for every ε of the schedule.
inline std::pair<VariationReport, VariationReport> variation_pair(const HomeoSpec& homeo, const WeightedPlane& source,
                                                                  const WeightedPlane& target,
                                                                  const VariationPairConfig& cfg = {}) {
  require(cfg.eps.size() >= 3, ErrorCode::InvalidArgument, "ε schedule needs at least three entries");
  for (std::size_t k = 0; k < cfg.eps.size(); ++k)
    require(cfg.eps[k] > 0.0 && (k == 0 || cfg.eps[k] < cfg.eps[k - 1]), ErrorCode::InvalidArgument,
            "ε schedule must be positive and strictly decreasing");
  const Domain omega = homeo.image_domain();
  require(detail::window_holds(source.window(), homeo.source.bbox), ErrorCode::InvalidArgument,
          "source window must contain the source domain");
  require(detail::window_holds(target.window(), omega.bbox), ErrorCode::InvalidArgument,
          "target window must contain the image domain");
  auto fwd = detail::annular_report([&](Point p) { return sigma_max(homeo.jac_forward(p)) * source.w(p); },
                                    homeo.source, cfg);
  auto inv = detail::annular_report([&](Point q) { return sigma_max(homeo.jac_inverse(q)) * target.w(q); }, omega,
                                    cfg);
  return {std::move(fwd), std::move(inv)};
}

struct TwoSidedConfig {
  std::vector<std::size_t> resolutions{64, 128, 256};
  double cauchy_tolerance = 0.05;
  double lower = 1.0 / 8.0;
  double upper = 8.0;
  VariationPairConfig singular_probe;  // used only when the map has singular points
};

struct TwoSidedReport {
  std::vector<std::size_t> resolutions;
  std::vector<double> forward;
  std::vector<double> inverse;
  std::vector<double> ratios;
  double target_min = 0.0, target_max = 0.0;  // sampled frame of w_target on Ω
  bool cauchy = false;
  bool in_interval = false;

  double ratio() const { return ratios.empty() ? 0.0 : ratios.back(); }
  bool passes() const { return cauchy && in_interval; }
};

/// |Df⁻¹|(Ω) / |Df|(G) on a ladder of lattices. Throws NotApplicable when
/// the target density degenerates on Ω̄ or either variation diverges.
inline TwoSidedReport two_sided_check(const HomeoSpec& homeo, const WeightedPlane& source,
                                      const WeightedPlane& target, const TwoSidedConfig& cfg = {}) {
  require(cfg.resolutions.size() >= 2, ErrorCode::InvalidArgument, "need at least two resolutions");
  const HomeoSpec inv = homeo.inverted();
  const Domain& omega = inv.source;
  if (const auto* rp = std::get_if<RadialPowerDensity>(&target.density()); rp && rp->exponent != 0.0) {
    const Rect& b = omega.bbox;
    const bool near_origin = b.xmin <= 0.0 && b.xmax >= 0.0 && b.ymin <= 0.0 && b.ymax >= 0.0;
    if (near_origin) throw Error(ErrorCode::NotApplicable, "target density is not bounded above and below on the image");
  }
  if (!homeo.singular_points.empty()) {
    const auto [f, g] = variation_pair(homeo, source, target, cfg.singular_probe);
    if (f.infinite || g.infinite) throw Error(ErrorCode::NotApplicable, "a variation diverges at a singular point");
  }
  TwoSidedReport rep;
  rep.target_min = 1e300;
  rep.target_max = 0.0;
  const Lattice probe = Lattice::over(omega.bbox, 64);
  for (std::size_t j = 0; j < probe.ny; ++j)
    for (std::size_t i = 0; i < probe.nx; ++i) {
      const Point q = probe.node(i, j);
      if (!omega.contains(q) || target.is_singular(q, 1e-12)) continue;
      rep.target_min = std::min(rep.target_min, target.w(q));
      rep.target_max = std::max(rep.target_max, target.w(q));
    }
  for (std::size_t n : cfg.resolutions) {
    const double a = exact_variation(homeo, source, n).value;
    const double b = exact_variation(inv, target, n).value;
    require(a > 0.0, ErrorCode::DegenerateField, "forward variation vanishes");
    rep.resolutions.push_back(n);
    rep.forward.push_back(a);
    rep.inverse.push_back(b);
    rep.ratios.push_back(b / a);
  }
  const std::size_t k = rep.ratios.size();
  rep.cauchy = std::abs(rep.ratios[k - 1] - rep.ratios[k - 2]) <= cfg.cauchy_tolerance * std::abs(rep.ratios[k - 1]);
  rep.in_interval = true;
  for (double r : rep.ratios) rep.in_interval = rep.in_interval && r >= cfg.lower && r <= cfg.upper;
  return rep;
}

struct SliceImageConfig {
  std::size_t resolution = 256;
  std::size_t samples = 1024;
  double constant = 2.0;
  double growth_limit = 0.10;  // relative length growth under doubled sampling that signals divergence
};

struct SliceImageReport {
  double perimeter_value = 0.0;
  double h1_value = 0.0;
  double constant = 2.0;
  double ratio() const { return h1_value > 0.0 ? perimeter_value / h1_value : 0.0; }
  bool holds() const { return perimeter_value <= constant * h1_value; }
};

namespace detail {

// The part of the line {x = x0} inside a domain, as [y_lo, y_hi].
inline std::pair<double, double> vertical_chord(const Domain& dom, double x0) {
  const Rect& b = dom.bbox;
  const std::size_t n = 4096;
  double first = NAN, last = NAN;
  const double dy = b.height() / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double y = b.ymin + dy * static_cast<double>(k);
    if (!dom.contains({x0, y})) continue;
    if (std::isnan(first)) first = y;
    last = y;
  }
  require(!std::isnan(first), ErrorCode::PreconditionViolated, "slice does not cross the source domain");
  auto refine = [&](double in, double out) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      (dom.contains({x0, mid}) ? in : out) = mid;
    }
    return in;
  };
  return {refine(first, first - dy), refine(last, last + dy)};
}

}  // namespace detail

/// Weighted perimeter of {g₁ > x0} relative to Ω against the weighted length
/// of the image slice f({x = x0} ∩ G).
inline SliceImageReport perimeter_vs_sliceimage(const HomeoSpec& homeo, const WeightedPlane& target, double x0,
                                                const SliceImageConfig& cfg = {}) {
  const auto [ylo, yhi] = detail::vertical_chord(homeo.source, x0);
  auto image_slice = [&](std::size_t n) {
    std::vector<Point> pts;
    for (std::size_t k = 0; k <= n; ++k)
      pts.push_back(homeo.forward({x0, ylo + (yhi - ylo) * static_cast<double>(k) / static_cast<double>(n)}));
    PolylineCurve c;
    c.points = std::move(pts);
    return c;
  };
  SliceImageReport rep;
  rep.constant = cfg.constant;
  rep.h1_value = weighted_length(image_slice(cfg.samples), target);
  const double refined = weighted_length(image_slice(2 * cfg.samples), target);
  if (!(std::isfinite(refined)) || refined > rep.h1_value * (1.0 + cfg.growth_limit))
    throw Error(ErrorCode::NotApplicable, "slice image length does not settle under refinement");

  const Domain omega = homeo.image_domain();
  const Rect& b = omega.bbox;
  const double pad = 4.0 * std::max(b.width(), b.height()) / static_cast<double>(cfg.resolution);
  const Lattice lat = Lattice::over(Rect{b.xmin - pad, b.ymin - pad, b.xmax + pad, b.ymax + pad}, cfg.resolution);
  const auto inverse = homeo.inverse;
  const IndicatorSet E = IndicatorSet::from_predicate(lat, [&](Point q) { return inverse(q).x > x0; });
  const WeightedPlane plane = target.with_window(lat.window());
  rep.perimeter_value = perimeter(E, plane, std::nullopt, omega.contains).value;
  return rep;
}

}  // namespace bvlab
