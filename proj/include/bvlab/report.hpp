#pragma once

#include <string>
#include <vector>

namespace bvlab {

/// Name of the variation-density convention for planar-target maps: the
/// largest singular value of the Jacobian.
inline constexpr const char* kVariationConvention = "sigma_max";

enum class GrowthClass { Bounded, Logarithmic, Power };

inline std::string to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Bounded: return "bounded";
    case GrowthClass::Logarithmic: return "logarithmic";
    case GrowthClass::Power: return "power";
  }
  return "unknown";
}

/// Output record of a variation or perimeter computation.
struct VariationReport {
  double value = 0.0;
  bool infinite = false;  // classified divergent; `value` then holds the last finite partial value
  double spacing = 0.0;   // lattice spacing, 0 for quadrature-based values
  std::size_t resolution = 0;
  double error_estimate = 0.0;
  std::size_t excluded_nodes = 0;  // singular density nodes left out of the sum
  bool degenerate = false;

  std::vector<double> epsilon_schedule;
  std::vector<double> per_epsilon_values;
  GrowthClass growth_class = GrowthClass::Bounded;
  double growth_rate = 0.0;      // slope in log(1/ε) or the power-law coefficient
  double growth_exponent = 0.0;  // α for power growth
  double fit_quality = 1.0;      // R² of the selected model
  std::string convention = kVariationConvention;
};

}  // namespace bvlab
