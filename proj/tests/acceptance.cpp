// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. Tolerances are fixed below.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bvlab/bvlab.hpp"

using namespace bvlab;
namespace fs = std::filesystem;

namespace {

constexpr double kSquaringTol = 0.02;
constexpr double kSlopeTol = 0.05;
constexpr double kFitR2 = 0.99;
constexpr double kCauchyTol = 0.05;
constexpr double kIdentityTol = 0.02;
constexpr double kCoareaTol = 0.05;
constexpr double kSliceSlack = 1.05;
constexpr double kComparabilitySlack = 1.1;
constexpr double kSquaringSeconds = 10.0;
constexpr double kJordanSeconds = 30.0;

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// Runs one criterion body, turning an escaped exception into a failure.
void criterion(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(id, false, std::string("exception: ") + e.what());
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BVLAB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void c1() {
  const auto f = builtin_homeo("radial_power");
  const auto plane = WeightedPlane::uniform(1.0, Rect{-1, -1, 1, 1});
  const auto t0 = std::chrono::steady_clock::now();
  const double v = exact_variation(f, plane, 512).value;
  const double secs = seconds_since(t0);
  const double exact = 4.0 * kPi / 3.0;
  const double rel = std::abs(v - exact) / exact;
  verdict(1, rel <= kSquaringTol && secs < kSquaringSeconds,
          "|Df|(B1) = " + fmt(v) + " vs 4pi/3 = " + fmt(exact) + ", rel " + fmt(rel, 3) + ", " + fmt(secs, 3) + " s");
}

void c2() {
  const Rect win{-2, -2, 2, 2};
  const auto f = builtin_homeo("radial_power");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, win), WeightedPlane::radial_power(-1.5, win));
  const double slope_err = std::abs(inv.growth_rate - 2.0 * kPi) / (2.0 * kPi);
  verdict(2, inv.growth_class == GrowthClass::Logarithmic && slope_err <= kSlopeTol && inv.fit_quality > kFitR2,
          "inverse " + to_string(inv.growth_class) + ", slope " + fmt(inv.growth_rate) + " vs 2pi, R2 " +
              fmt(inv.fit_quality));
}

void c3() {
  const Rect win{-2, -2, 2, 2};
  const auto f = builtin_homeo("radial_twist");
  const auto [fwd, inv] = variation_pair(f, WeightedPlane::uniform(1.0, win), WeightedPlane::radial_power(1.0, win));
  VariationPairConfig fine;
  fine.quadrature.theta_panels *= 2;
  fine.quadrature.panels_per_decade *= 2;
  const auto inv_fine =
      variation_pair(f, WeightedPlane::uniform(1.0, win), WeightedPlane::radial_power(1.0, win), fine).second;
  const auto& pe = inv.per_epsilon_values;
  const double tail = std::abs(pe.back() - pe[pe.size() - 2]) / std::abs(pe.back());
  const double refine = std::abs(inv_fine.value - inv.value) / std::abs(inv_fine.value);
  const bool ok = fwd.growth_class == GrowthClass::Logarithmic && inv.growth_class == GrowthClass::Bounded &&
                  !inv.infinite && tail <= kCauchyTol && refine <= kCauchyTol;
  verdict(3, ok,
          "forward " + to_string(fwd.growth_class) + " (slope " + fmt(fwd.growth_rate) + "), inverse " +
              to_string(inv.growth_class) + " -> " + fmt(inv.value) + ", last-step change " + fmt(tail, 3) +
              ", refinement change " + fmt(refine, 3));
}

void c4() {
  const fs::path dir = fs::temp_directory_path() / "bvlab_acceptance_c4";
  fs::remove_all(dir);
  const int rc = run_cli("-o \"" + dir.string() + "\" verify-theorem");
  const auto rep = io::read_json(dir / "verify-theorem" / "report.json");
  bool ok = rc == 0;
  std::size_t evaluated = 0;
  double lo = 1e300, hi = 0.0;
  for (const auto& c : rep.at("result").at("cases")) {
    if (!c.contains("report")) {
      ok = false;
      continue;
    }
    ++evaluated;
    const auto& r = c.at("report");
    ok = ok && r.at("cauchy").get<bool>();
    for (double x : r.at("ratios").get<std::vector<double>>()) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  ok = ok && evaluated == 10 && lo >= 1.0 / 8.0 && hi <= 8.0;

  const Rect win{-3, -3, 3, 3};
  const auto id = builtin_homeo("identity");
  std::string ident;
  for (double c : {0.5, 2.0}) {
    const auto r = two_sided_check(id, WeightedPlane::uniform(1.0, win), WeightedPlane::uniform(c, win));
    const double rel = std::abs(r.ratio() - c) / c;
    ok = ok && rel <= kIdentityTol;
    ident += " c=" + fmt(c) + ":" + fmt(r.ratio());
  }
  fs::remove_all(dir);
  verdict(4, ok,
          std::to_string(evaluated) + " cases, ratios in [" + fmt(lo) + ", " + fmt(hi) + "], identity" + ident);
}

void c5() {
  const Rect box{-1, -1, 1, 1};
  const auto plane = WeightedPlane::uniform(1.0, box);
  const auto field = [&](const std::string& name, std::size_t n) {
    const auto lat = Lattice::over(box, n);
    if (name == "ramp") return GridField::sample(lat, [](Point p) { return p.x; });
    if (name == "cone") return GridField::sample(lat, [](Point p) { return norm(p); });
    const auto disk = IndicatorSet::from_predicate(lat, [](Point p) { return norm(p) < 0.5; });
    return mollify_indicator(disk, plane, 0.1);
  };
  bool ok = true;
  std::string detail;
  for (const std::string name : {"ramp", "cone", "mollified-disk"}) {
    const double g256 = coarea_check(field(name, 256), plane, 128).relative_gap();
    const double g512 = coarea_check(field(name, 512), plane, 128).relative_gap();
    ok = ok && g256 <= kCoareaTol && g512 <= g256;
    detail += name + " " + fmt(g256, 3) + " -> " + fmt(g512, 3) + "; ";
  }
  verdict(5, ok, "relative gaps at 256 -> 512: " + detail);
}

void c6() {
  const Lattice lat = Lattice::over(Rect{-1, -1, 1, 1}, 32);
  const auto plane = WeightedPlane::uniform(1.0, lat.window());
  std::mt19937_64 rng(20261016);
  std::bernoulli_distribution coin(0.5);
  const auto random_mask = [&] {
    std::vector<std::uint8_t> m(lat.size());
    for (auto& x : m) x = coin(rng) ? 1 : 0;
    return IndicatorSet(lat, std::move(m));
  };
  int equal = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto E = random_mask(), F = random_mask();
    const auto r = submodularity_check(E, F, plane);
    if (r.lhs == r.rhs) ++equal;
    worst = std::max(worst, r.rhs - r.lhs);
  }
  verdict(6, equal == 100,
          std::to_string(equal) + "/100 pairs with Per(E^F)+Per(EvF) == Per(E)+Per(F) exactly; largest gap " +
              fmt(worst));
}

void c7() {
  bool ok = true;
  double worst = 0.0;
  std::size_t runs = 0;
  for (const auto& name : builtin_family_names()) {
    const auto f = builtin_homeo(name);
    for (std::size_t n : {256, 512}) {
      const auto lat = Lattice::over(f.source.bbox, n);
      const auto plane = WeightedPlane::uniform(1.0, lat.window());
      for (auto ax : {SliceAxis::X, SliceAxis::Y}) {
        const auto r = slice_variation(f, plane, lat, ax, kSliceSlack - 1.0);
        ok = ok && r.slice_integral <= r.full_variation * kSliceSlack;
        worst = std::max(worst, r.slice_integral / r.full_variation);
        ++runs;
      }
    }
  }
  verdict(7, ok, std::to_string(runs) + " slice runs, largest slice/full ratio " + fmt(worst));
}

void c8() {
  const Rect win{-1, -1, 1, 1};
  struct Case {
    JordanRegion region;
    WeightedPlane plane;
  };
  const std::vector<Case> cases{
      {disk_region({0, 0}, 0.5), WeightedPlane::uniform(1.0, win)},
      {square_region({0, 0}, 1.0), WeightedPlane::uniform(1.0, win)},
      {ellipse_region({0, 0}, 0.6, 0.3), WeightedPlane(OscillatingDensity{}, win)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = golab_check(run_pipeline(c.region, c.plane, PipelineConfig{}));
    const double secs = seconds_since(t0);
    ok = ok && g.passes() && secs < kJordanSeconds;
    detail += c.region.name + " " + (g.passes() ? "ok" : "fails") + " (Hausdorff " +
              fmt(g.final_hausdorff / g.spacing, 3) + "h, " + fmt(secs, 3) + " s); ";
  }
  verdict(8, ok, detail);
}

void c9() {
  const std::vector<std::pair<std::string, std::function<bool(Point)>>> masks{
      {"square", [](Point p) { return std::abs(p.x) < 0.5 && std::abs(p.y) < 0.5; }},
      {"annulus", [](Point p) { const double r = norm(p); return r > 0.3 && r < 0.8; }},
      {"two-squares",
       [](Point p) { return std::abs(p.y) < 0.35 && ((p.x > -0.8 && p.x < -0.1) || (p.x > 0.1 && p.x < 0.8)); }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, inside] : masks) {
    std::vector<std::size_t> max20;
    bool structural = true;
    for (std::size_t n : {128, 256, 512}) {
      const auto G = IndicatorSet::from_predicate(Lattice::over({-1, -1, 1, 1}, n), inside);
      const auto cover = build_cover(G);
      structural = structural && vitali_disjoint(cover) && overlap_bound(cover, 5).min_multiplicity >= 1;
      max20.push_back(overlap_bound(cover, 20).max_multiplicity);
    }
    const std::size_t a = max20[1], b = max20[2];
    const std::size_t spread = a > b ? a - b : b - a;
    ok = ok && structural && spread <= 1;
    detail += name + (structural ? "" : " (structure broken)") + " max20 " + std::to_string(max20[0]) + "/" +
              std::to_string(max20[1]) + "/" + std::to_string(max20[2]) + "; ";
  }
  verdict(9, ok, detail);
}

void c10() {
  const Rect win{-3, -3, 3, 3};
  const auto plane = WeightedPlane::uniform(1.0, win);
  const std::vector<double> ladder{0.1, 0.03, 0.01, 0.003};
  const std::vector<std::vector<PolylineCurve>> sets{
      {segment_curve({-1, 0}, {1, 0})},
      {segment_curve({-1, -1}, {1, 0.5}, 4), segment_curve({0, 1}, {0.5, 2})},
      {circle_curve({0, 0}, 1.0, 4096)},
      {circle_curve({0.5, -0.5}, 0.3, 2048)},
  };
  bool ok = true;
  double lo = 1e300, hi = 0.0;
  for (const auto& curves : sets) {
    const auto r = comparability_check(curves, plane, ladder);
    ok = ok && r.applicable;
    lo = std::min(lo, r.ratio_min);
    hi = std::max(hi, r.ratio_max);
  }
  ok = ok && lo >= 1.0 / kComparabilitySlack && hi <= kPi * kComparabilitySlack;
  verdict(10, ok, "hh/h1 over the ladder in [" + fmt(lo) + ", " + fmt(hi) + "]");
}

void c11() {
  const fs::path dir = fs::temp_directory_path() / "bvlab_acceptance_c11";
  fs::remove_all(dir);
  const int a = run_cli("-o \"" + (dir / "a").string() + "\" verify-theorem");
  const int b = run_cli("-o \"" + (dir / "b").string() + "\" verify-theorem");
  const std::string ra = io::read_file(dir / "a/verify-theorem/report.json");
  const std::string rb = io::read_file(dir / "b/verify-theorem/report.json");
  fs::remove_all(dir);
  verdict(11, a == 0 && b == 0 && ra == rb && !ra.empty(),
          "report.json " + std::to_string(ra.size()) + " bytes, " + (ra == rb ? "identical" : "different"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  for (std::size_t k = 0; k < all.size(); ++k) criterion(static_cast<int>(k + 1), all[k]);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
