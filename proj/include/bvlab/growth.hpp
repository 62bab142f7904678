#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bvlab/error.hpp"
#include "bvlab/report.hpp"

namespace bvlab {

struct GrowthConfig {
  double cauchy_tolerance = 0.05;  // last relative increment for a bounded verdict
  double decay_ratio = 0.5;        // last/first increment per log unit for a bounded verdict
  double power_margin = 0.005;     // R² advantage a power law needs over the log law
};

struct GrowthFit {
  GrowthClass growth_class = GrowthClass::Bounded;
  double rate = 0.0;      // log slope, or power-law coefficient
  double exponent = 0.0;  // α for power growth, β of the convergence tail when bounded
  double r2 = 0.0;
  double limit = 0.0;     // last value, the ε → 0 estimate when bounded
};

namespace detail {

struct LinearFit {
  double intercept = 0.0, slope = 0.0, r2 = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k]; sy += y[k]; sxx += x[k] * x[k]; sxy += x[k] * y[k]; syy += y[k] * y[k];
  }
  const double vxx = sxx - sx * sx / n, vxy = sxy - sx * sy / n, vyy = syy - sy * sy / n;
  LinearFit f;
  f.slope = vxx > 0 ? vxy / vxx : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vyy > 0 && vxx > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return f;
}

// Best fit of y ≈ a + b ε^{-α} (sign > 0) or y ≈ a + b ε^{β} (sign < 0) over an exponent grid.
inline std::pair<double, LinearFit> best_power_fit(const std::vector<double>& eps, const std::vector<double>& y,
                                                   double sign) {
  double best_exp = 0.0;
  LinearFit best;
  best.r2 = -1.0;
  for (double a = 0.05; a <= 4.0 + 1e-12; a += 0.01) {
    std::vector<double> x;
    for (double e : eps) x.push_back(std::pow(e, -sign * a));
    const LinearFit f = least_squares(x, y);
    if (f.r2 > best.r2) {
      best = f;
      best_exp = a;
    }
  }
  return {best_exp, best};
}

}  // namespace detail

/// Classify per-ε values (ε strictly decreasing) as bounded, logarithmic or
/// power-law growth by regression against {1, log(1/ε), ε^{-α}}.
inline GrowthFit classify_growth(const std::vector<double>& eps, const std::vector<double>& values,
                                 const GrowthConfig& cfg = {}) {
  require(eps.size() == values.size() && eps.size() >= 3, ErrorCode::InvalidArgument,
          "growth classification needs at least three (ε, value) pairs");
  for (std::size_t k = 1; k < eps.size(); ++k)
    require(eps[k] < eps[k - 1] && eps[k] > 0.0, ErrorCode::InvalidArgument, "ε schedule must be strictly decreasing");
  const std::size_t n = eps.size();
  std::vector<double> L;
  for (double e : eps) L.push_back(std::log(1.0 / e));

  GrowthFit fit;
  fit.limit = values.back();
  const double first_inc = (values[1] - values[0]) / (L[1] - L[0]);
  const double last_inc = (values[n - 1] - values[n - 2]) / (L[n - 1] - L[n - 2]);
  const double last_rel = std::abs(values[n - 1] - values[n - 2]) / std::max(std::abs(values.back()), 1e-300);
  const bool decaying = first_inc <= 0.0 ? last_inc <= 0.0 : last_inc <= cfg.decay_ratio * first_inc;
  if (last_rel <= cfg.cauchy_tolerance && decaying) {
    fit.growth_class = GrowthClass::Bounded;
    const auto [beta, tail] = detail::best_power_fit(eps, values, -1.0);
    fit.exponent = beta;
    fit.rate = 0.0;
    fit.r2 = tail.r2;
    return fit;
  }
  const detail::LinearFit log_fit = detail::least_squares(L, values);
  const auto [alpha, pow_fit] = detail::best_power_fit(eps, values, 1.0);
  if (pow_fit.r2 > log_fit.r2 + cfg.power_margin) {
    fit.growth_class = GrowthClass::Power;
    fit.exponent = alpha;
    fit.rate = pow_fit.slope;
    fit.r2 = pow_fit.r2;
  } else {
    fit.growth_class = GrowthClass::Logarithmic;
    fit.rate = log_fit.slope;
    fit.r2 = log_fit.r2;
  }
  return fit;
}

}  // namespace bvlab
