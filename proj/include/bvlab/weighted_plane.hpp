#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"
#include "bvlab/grid.hpp"

namespace bvlab {

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

struct UniformDensity {
  double value = 1.0;
};

/// scale * |x|^exponent, singular (or vanishing) only at the origin.
struct RadialPowerDensity {
  double exponent = 0.0;
  double scale = 1.0;
};

/// base + amplitude * sin(frequency * x) * cos(frequency * y).
/// Takes values in [base - amplitude, base + amplitude].
struct OscillatingDensity {
  double base = 1.25;
  double amplitude = 0.75;
  double frequency = 3.0;
};

/// Bilinear interpolation of a positive table; clamped outside the table.
struct TabulatedDensity {
  std::shared_ptr<const GridField> table;
  double scale = 1.0;
};

using Density = std::variant<UniformDensity, RadialPowerDensity, OscillatingDensity, TabulatedDensity>;

inline std::string family_name(const Density& d) {
  struct V {
    std::string operator()(const UniformDensity&) const { return "uniform"; }
    std::string operator()(const RadialPowerDensity&) const { return "radial_power"; }
    std::string operator()(const OscillatingDensity&) const { return "oscillating"; }
    std::string operator()(const TabulatedDensity&) const { return "tabulated"; }
  };
  return std::visit(V{}, d);
}

inline double density_at(const Density& d, Point p) {
  struct V {
    Point p;
    double operator()(const UniformDensity& u) const { return u.value; }
    double operator()(const RadialPowerDensity& rp) const {
      const double r = norm(p);
      if (rp.exponent == 0.0) return rp.scale;
      return rp.scale * std::pow(r, rp.exponent);
    }
    double operator()(const OscillatingDensity& o) const {
      return o.base + o.amplitude * std::sin(o.frequency * p.x) * std::cos(o.frequency * p.y);
    }
    double operator()(const TabulatedDensity& t) const { return t.scale * t.table->interpolate(p); }
  };
  return std::visit(V{p}, d);
}

/// The density multiplied by a positive constant.
inline Density scaled(const Density& d, double c) {
  struct V {
    double c;
    Density operator()(UniformDensity u) const { return UniformDensity{u.value * c}; }
    Density operator()(RadialPowerDensity r) const { return RadialPowerDensity{r.exponent, r.scale * c}; }
    Density operator()(OscillatingDensity o) const {
      return OscillatingDensity{o.base * c, o.amplitude * c, o.frequency};
    }
    Density operator()(TabulatedDensity t) const { return TabulatedDensity{t.table, t.scale * c}; }
  };
  return std::visit(V{c}, d);
}

/// The planar metric measure space (R^2, Euclidean distance, w * Lebesgue),
/// restricted to a rectangular window.
class WeightedPlane {
 public:
  WeightedPlane(Density density, Rect window) : density_(std::move(density)), window_(window) {
    require(window_.valid(), ErrorCode::InvalidArgument, "window must have positive width and height");
    validate_density();
  }

  static WeightedPlane uniform(double c, Rect window) { return WeightedPlane(UniformDensity{c}, window); }
  static WeightedPlane radial_power(double nu, Rect window) {
    return WeightedPlane(RadialPowerDensity{nu, 1.0}, window);
  }

  const Density& density() const { return density_; }
  const Rect& window() const { return window_; }

  double w(Point p) const { return density_at(density_, p); }

  /// Points excluded from the positivity requirement (the origin for radial powers).
  bool is_singular(Point p, double tol = 0.0) const {
    if (!std::holds_alternative<RadialPowerDensity>(density_)) return false;
    if (std::get<RadialPowerDensity>(density_).exponent == 0.0) return false;
    return norm(p) <= tol;
  }

  bool is_radial() const { return std::holds_alternative<RadialPowerDensity>(density_); }
  bool is_uniform() const { return std::holds_alternative<UniformDensity>(density_); }

  WeightedPlane rescaled(double c) const { return WeightedPlane(scaled(density_, c), window_); }
  WeightedPlane with_window(Rect win) const { return WeightedPlane(density_, win); }

 private:
  void validate_density() const {
    struct V {
      void operator()(const UniformDensity& u) const {
        require(u.value > 0.0 && std::isfinite(u.value), ErrorCode::InvalidDensity, "uniform density must be positive");
      }
      void operator()(const RadialPowerDensity& r) const {
        require(r.exponent > -2.0, ErrorCode::InvalidDensity, "radial exponent must exceed -2 for finite ball measures");
        require(r.scale > 0.0 && std::isfinite(r.scale), ErrorCode::InvalidDensity, "radial scale must be positive");
      }
      void operator()(const OscillatingDensity& o) const {
        require(o.base - std::abs(o.amplitude) > 0.0, ErrorCode::InvalidDensity,
                "oscillating density must stay positive");
      }
      void operator()(const TabulatedDensity& t) const {
        require(t.table != nullptr, ErrorCode::InvalidDensity, "tabulated density needs a table");
        require(t.scale > 0.0, ErrorCode::InvalidDensity, "tabulated scale must be positive");
        for (double v : t.table->values)
          require(v > 0.0 && std::isfinite(v), ErrorCode::InvalidDensity, "tabulated density must be positive and finite");
      }
    };
    std::visit(V{}, density_);
  }

  Density density_;
  Rect window_;
};

// ---------------------------------------------------------------------------
// Ball measures
// ---------------------------------------------------------------------------

enum class MeasureMethod { PolarAdaptive, CartesianMidpoint };

inline std::string to_string(MeasureMethod m) {
  return m == MeasureMethod::PolarAdaptive ? "polar-adaptive" : "cartesian-midpoint";
}

struct MeasureEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  MeasureMethod method = MeasureMethod::PolarAdaptive;
  bool clipped = false;  // ball not contained in the window
};

namespace detail {

// Midpoint rule on B_r(c) ∩ window at n x n sub-cells of the ball's bounding box.
inline double midpoint_ball(const WeightedPlane& plane, Point c, double r, int n) {
  const Rect& win = plane.window();
  const double s = 2.0 * r / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point p{c.x - r + (i + 0.5) * s, c.y - r + (j + 0.5) * s};
      if (distance(p, c) >= r || !win.contains(p)) continue;
      const double w = plane.w(p);
      if (std::isfinite(w)) sum += w;
    }
  }
  return sum * s * s;
}

inline MeasureEstimate cartesian_ball_measure(const WeightedPlane& plane, Point c, double r) {
  const double coarse = midpoint_ball(plane, c, r, 200);
  const double fine = midpoint_ball(plane, c, r, 400);
  return {fine, std::abs(fine - coarse), MeasureMethod::CartesianMidpoint, false};
}

// Angular measure of the circle |x| = rho lying inside B_r(c), with d = |c|.
inline double circle_in_ball_angle(double rho, double d, double r) {
  if (d == 0.0) return rho < r ? 2.0 * kPi : 0.0;
  if (rho <= r - d) return 2.0 * kPi;
  if (rho >= r + d || rho <= d - r) return 0.0;
  const double cosv = (rho * rho + d * d - r * r) / (2.0 * rho * d);
  return 2.0 * std::acos(std::clamp(cosv, -1.0, 1.0));
}

// Radial power density integrated in polar coordinates about the origin:
// m(B_r(c)) = ∫ scale * rho^(nu+1) * angle(rho) d rho. The fully covered inner
// disk is integrated in closed form; the partial band is split into panels
// that shrink geometrically toward a zero lower limit.
inline MeasureEstimate radial_ball_measure(const RadialPowerDensity& rp, Point c, double r) {
  const double d = norm(c);
  const double nu = rp.exponent;
  double value = 0.0;
  double err = 0.0;
  double band_lo = std::max(0.0, d - r);
  if (d < r) {
    const double inner = r - d;
    value += 2.0 * kPi * rp.scale * std::pow(inner, nu + 2.0) / (nu + 2.0);
    band_lo = inner;
  }
  const double band_hi = r + d;
  if (d > 0.0 && band_hi > band_lo) {
    auto f = [&](double rho) {
      if (rho <= 0.0) return 0.0;
      return rp.scale * std::pow(rho, nu + 1.0) * circle_in_ball_angle(rho, d, r);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    std::vector<double> cuts{band_hi};
    if (band_lo == 0.0) {
      double x = 0.5 * band_hi;
      while (x > 1e-12 * band_hi) {
        cuts.push_back(x);
        x *= 0.5;
      }
      cuts.push_back(0.0);
    } else {
      cuts.push_back(band_lo);
    }
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double e = 0.0;
      value += integrator.integrate(f, cuts[k + 1], cuts[k], 1e-12, &e);
      err += e;
    }
    if (band_lo == 0.0) {
      // Remaining [0, cuts.back-1]: bounded by the full-circle integral.
      const double tail = cuts[cuts.size() - 2];
      err += 2.0 * kPi * rp.scale * std::pow(tail, nu + 2.0) / (nu + 2.0);
    }
  }
  err += 4.0 * std::numeric_limits<double>::epsilon() * value;
  return {value, err, MeasureMethod::PolarAdaptive, false};
}

// Smooth density: polar coordinates about the ball centre, periodic
// trapezoid in angle, adaptive Gauss-Kronrod in radius.
inline MeasureEstimate smooth_polar_ball_measure(const WeightedPlane& plane, Point c, double r) {
  auto ring = [&](double rho) {
    auto g = [&](double th) { return plane.w(c + polar_point(rho, th)); };
    return rho * boost::math::quadrature::trapezoidal(g, 0.0, 2.0 * kPi, 1e-12);
  };
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ring, 0.0, r, 8, 1e-12, &err);
  return {value, err + 4.0 * std::numeric_limits<double>::epsilon() * value, MeasureMethod::PolarAdaptive, false};
}

}  // namespace detail

/// m(B_r(center) ∩ window) with an error bound.
inline MeasureEstimate ball_measure(const WeightedPlane& plane, Point center, double r) {
  require(r > 0.0 && std::isfinite(r), ErrorCode::InvalidArgument, "ball radius must be positive");
  require(plane.window().intersects_disk(center, r), ErrorCode::InvalidArgument, "ball does not meet the window");
  if (!plane.window().contains_disk(center, r)) {
    MeasureEstimate m = detail::cartesian_ball_measure(plane, center, r);
    m.clipped = true;
    return m;
  }
  const Density& d = plane.density();
  if (const auto* u = std::get_if<UniformDensity>(&d)) {
    const double v = u->value * kPi * r * r;
    return {v, 4.0 * std::numeric_limits<double>::epsilon() * v, MeasureMethod::PolarAdaptive, false};
  }
  if (const auto* rp = std::get_if<RadialPowerDensity>(&d)) return detail::radial_ball_measure(*rp, center, r);
  if (std::holds_alternative<OscillatingDensity>(d)) return detail::smooth_polar_ball_measure(plane, center, r);
  return detail::cartesian_ball_measure(plane, center, r);
}

// ---------------------------------------------------------------------------
// Structural constants
// ---------------------------------------------------------------------------

struct SampleConfig {
  std::vector<Point> centers;
  std::vector<double> radii;
};

/// `count` radii spaced geometrically from rmin to rmax inclusive.
inline std::vector<double> geometric_ladder(double rmin, double rmax, std::size_t count) {
  require(rmin > 0.0 && rmax > rmin && count >= 2, ErrorCode::InvalidArgument, "bad radius ladder");
  std::vector<double> out(count);
  const double q = std::log(rmax / rmin) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = rmin * std::exp(q * static_cast<double>(k));
  out.back() = rmax;
  return out;
}

struct DoublingReport {
  double value = 0.0;  // max m(B_2r)/m(B_r)
  std::size_t samples_used = 0;
  std::size_t samples_flagged = 0;  // skipped because B_2r was clipped
};

inline DoublingReport doubling_report(const WeightedPlane& plane, const SampleConfig& cfg) {
  require(!cfg.centers.empty() && !cfg.radii.empty(), ErrorCode::InvalidArgument, "empty doubling sample set");
  DoublingReport rep;
  for (Point c : cfg.centers) {
    for (double r : cfg.radii) {
      if (!plane.window().contains_disk(c, 2.0 * r)) {
        ++rep.samples_flagged;
        continue;
      }
      const double small = ball_measure(plane, c, r).value;
      const double big = ball_measure(plane, c, 2.0 * r).value;
      rep.value = std::max(rep.value, big / small);
      ++rep.samples_used;
    }
  }
  require(rep.samples_used > 0, ErrorCode::InvalidArgument, "every doubling sample was clipped by the window");
  return rep;
}

inline double doubling_estimate(const WeightedPlane& plane, const SampleConfig& cfg) {
  return doubling_report(plane, cfg).value;
}

struct BallSample {
  Point center;
  double radius = 0.0;
  double measure = 0.0;
};

struct AhlforsReport {
  double target_exponent = 2.0;
  double nu_hat = 0.0;
  double fit_r2 = 0.0;
  double c_lower = 0.0;  // min m(B_r)/r^target
  double c_upper = 0.0;  // max m(B_r)/r^target
  double frame_ratio_2 = 0.0;  // max/min of m(B_r)/r^2
  double frame_tolerance = 1e3;
  bool regular_2 = false;
  std::size_t flagged = 0;
  std::vector<BallSample> samples;
};

inline AhlforsReport ahlfors_fit(const WeightedPlane& plane, const SampleConfig& cfg, double target_exponent,
                                 double frame_tolerance = 1e3) {
  require(cfg.radii.size() >= 2, ErrorCode::InvalidArgument, "radius ladder needs at least two radii");
  require(!cfg.centers.empty(), ErrorCode::InvalidArgument, "ahlfors fit needs at least one centre");
  AhlforsReport rep;
  rep.target_exponent = target_exponent;
  rep.frame_tolerance = frame_tolerance;
  for (Point c : cfg.centers) {
    for (double r : cfg.radii) {
      if (!plane.window().contains_disk(c, r)) {
        ++rep.flagged;
        continue;
      }
      rep.samples.push_back({c, r, ball_measure(plane, c, r).value});
    }
  }
  require(rep.samples.size() >= 2, ErrorCode::InvalidArgument, "fewer than two unclipped ball samples");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(rep.samples.size());
  double lo2 = std::numeric_limits<double>::infinity(), hi2 = 0.0;
  rep.c_lower = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.samples) {
    const double x = std::log(s.radius), y = std::log(s.measure);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    const double ct = s.measure / std::pow(s.radius, target_exponent);
    rep.c_lower = std::min(rep.c_lower, ct);
    rep.c_upper = std::max(rep.c_upper, ct);
    const double c2 = s.measure / (s.radius * s.radius);
    lo2 = std::min(lo2, c2);
    hi2 = std::max(hi2, c2);
  }
  const double vxx = sxx - sx * sx / n, vxy = sxy - sx * sy / n, vyy = syy - sy * sy / n;
  rep.nu_hat = vxx > 0 ? vxy / vxx : 0.0;
  rep.fit_r2 = (vxx > 0 && vyy > 0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  rep.frame_ratio_2 = hi2 / lo2;
  rep.regular_2 = rep.frame_ratio_2 < frame_tolerance;
  return rep;
}

}  // namespace bvlab
