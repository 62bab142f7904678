// bvlab command-line driver.
//
// Every subcommand reads an optional JSON config, lets flags override its
// fields, runs one computation and writes a JSON report (plus CSV tables)
// into the output directory. Exit status: 0 all checks pass, 1 a check
// failed, 2 bad configuration, 3 a computational precondition failed.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvlab/bvlab.hpp"

namespace fs = std::filesystem;
using bvlab::io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulls typed fields out of the merged config, turning type errors into
// configuration errors.
struct Fields {
  const json& j;

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!j.contains(key)) return fallback;
    try {
      return j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("field '" + key + "': " + e.what());
    }
  }
};

bvlab::Rect parse_window(const json& cfg, const std::string& key, bvlab::Rect fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto v = Fields{cfg}.get<std::vector<double>>(key, {});
  if (v.size() != 4) throw ConfigError("'" + key + "' needs four numbers xmin, ymin, xmax, ymax");
  const bvlab::Rect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) throw ConfigError("'" + key + "' is empty");
  return r;
}

bvlab::WeightedPlane make_plane(const json& cfg, const std::string& key, const std::string& fallback,
                                bvlab::Rect window) {
  const json spec = cfg.contains(key) ? cfg.at(key) : json(fallback);
  try {
    const bvlab::Density d = spec.is_string() ? bvlab::io::parse_density(spec.get<std::string>())
                                              : bvlab::io::parse_density(spec);
    return bvlab::WeightedPlane(d, window);
  } catch (const bvlab::Error& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

bvlab::HomeoSpec make_homeo(const json& spec, std::optional<bvlab::Domain> source = std::nullopt) {
  const std::string family = Fields{spec}.get<std::string>("family", "identity");
  const auto params = Fields{spec}.get<std::map<std::string, double>>("params", {});
  try {
    if (family == "user_defined") {
      const std::string stem = Fields{spec}.get<std::string>("map", "");
      const std::string inv = Fields{spec}.get<std::string>("inverse_map", "");
      if (stem.empty() || inv.empty()) throw ConfigError("user_defined needs 'map' and 'inverse_map' stems");
      return bvlab::user_defined_homeo(bvlab::io::read_map(stem), bvlab::io::read_map(inv), source);
    }
    return bvlab::builtin_homeo(family, params, source);
  } catch (const bvlab::Error& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::size_t> increasing_sizes(const json& cfg, const std::string& key, std::vector<std::size_t> fallback) {
  const auto v = Fields{cfg}.get<std::vector<std::size_t>>(key, fallback);
  if (v.empty()) throw ConfigError("'" + key + "' is empty");
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] < 4 || (k > 0 && v[k] <= v[k - 1])) throw ConfigError("'" + key + "' must be increasing and at least 4");
  return v;
}

std::vector<double> epsilon_schedule(const json& cfg) {
  const auto eps = Fields{cfg}.get<std::vector<double>>("eps", {1e-1, 1e-2, 1e-3, 1e-4});
  if (eps.size() < 3) throw ConfigError("'eps' needs at least three entries");
  for (std::size_t k = 0; k < eps.size(); ++k)
    if (!(eps[k] > 0.0 && eps[k] < 1.0) || (k > 0 && eps[k] >= eps[k - 1]))
      throw ConfigError("'eps' must be strictly decreasing in (0, 1)");
  return eps;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the report body and sets `pass`.
// ---------------------------------------------------------------------------

struct Output {
  fs::path dir;
  std::vector<std::string> files;

  void csv(const std::string& name, const bvlab::io::CsvTable& t) {
    bvlab::io::atomic_write(dir / name, t.str());
    files.push_back(name);
  }
};

json analyze_example(const json& cfg, Output& out, bool& pass) {
  const bvlab::Rect window = parse_window(cfg, "window", {-2, -2, 2, 2});
  const auto homeo = make_homeo(cfg);
  const auto source = make_plane(cfg, "source_weight", "uniform:1", window);
  const auto target = make_plane(cfg, "target_weight", "uniform:1", window);
  bvlab::VariationPairConfig vc;
  vc.eps = epsilon_schedule(cfg);
  vc.quadrature.theta_panels = Fields{cfg}.get<std::size_t>("theta_panels", 32);
  vc.quadrature.panels_per_decade = Fields{cfg}.get<std::size_t>("panels_per_decade", 2);
  if (vc.quadrature.theta_panels == 0 || vc.quadrature.panels_per_decade == 0)
    throw ConfigError("quadrature panel counts must be positive");

  const auto [fwd, inv] = bvlab::variation_pair(homeo, source, target, vc);
  for (const auto* rep : {&fwd, &inv}) {
    bvlab::io::CsvTable t;
    t.header = {"eps", "value"};
    for (std::size_t k = 0; k < rep->epsilon_schedule.size(); ++k)
      t.add_row({rep->epsilon_schedule[k], rep->per_epsilon_values[k]});
    out.csv(rep == &fwd ? "forward_eps.csv" : "inverse_eps.csv", t);
  }
  const auto monotone = [](const bvlab::VariationReport& r) {
    return std::is_sorted(r.per_epsilon_values.begin(), r.per_epsilon_values.end());
  };
  pass = monotone(fwd) && monotone(inv);
  return {{"family", homeo.name}, {"forward", bvlab::io::to_json(fwd)}, {"inverse", bvlab::io::to_json(inv)},
          {"monotone", pass}};
}

json default_theorem_cases() {
  auto c = [](std::string fam, json params, std::string sw, std::string tw) {
    return json{{"family", fam}, {"params", params}, {"source_weight", sw}, {"target_weight", tw}};
  };
  const json none = json::object();
  return json::array({
      c("identity", none, "uniform:1", "uniform:1"),
      c("identity", none, "uniform:1", "uniform:2"),
      c("identity", none, "oscillating", "oscillating"),
      c("linear", {{"a", 1.5}, {"b", 0.0}, {"c", 0.0}, {"d", 0.75}}, "uniform:1", "uniform:0.5"),
      c("linear", {{"a", 0.8}, {"b", -0.6}, {"c", 0.6}, {"d", 0.8}}, "oscillating", "uniform:1"),
      c("shear", {{"lambda", 0.5}}, "uniform:1", "oscillating"),
      c("shear", {{"lambda", 1.0}}, "uniform:1", "oscillating"),
      c("shear", {{"lambda", 2.0}}, "uniform:1", "oscillating"),
      c("swirl", {{"beta", 1.0}}, "uniform:1", "uniform:1"),
      c("swirl", {{"beta", 1.0}}, "oscillating", "oscillating"),
  });
}

json verify_theorem(const json& cfg, Output& out, bool& pass) {
  const bvlab::Rect window = parse_window(cfg, "window", {-3, -3, 3, 3});
  bvlab::TwoSidedConfig tc;
  tc.resolutions = increasing_sizes(cfg, "resolutions", {64, 128, 256});
  tc.cauchy_tolerance = Fields{cfg}.get<double>("cauchy_tolerance", 0.05);
  tc.lower = Fields{cfg}.get<double>("lower", 1.0 / 8.0);
  tc.upper = Fields{cfg}.get<double>("upper", 8.0);
  if (tc.resolutions.size() < 2) throw ConfigError("'resolutions' needs at least two entries");
  if (!(tc.lower > 0.0 && tc.upper > tc.lower)) throw ConfigError("need 0 < lower < upper");

  json cases = cfg.contains("cases") ? cfg.at("cases") : json();
  if (cases.is_null()) cases = cfg.contains("family") ? json::array({cfg}) : default_theorem_cases();
  if (!cases.is_array() || cases.empty()) throw ConfigError("'cases' must be a nonempty array");

  pass = true;
  json results = json::array();
  bvlab::io::CsvTable t;
  t.header = {"case", "resolution", "forward", "inverse", "ratio"};
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const json& cs = cases[k];
    const auto homeo = make_homeo(cs);
    const auto source = make_plane(cs, "source_weight", "uniform:1", window);
    const auto target = make_plane(cs, "target_weight", "uniform:1", window);
    json entry{{"family", homeo.name}, {"params", homeo.params}};
    try {
      const auto rep = bvlab::two_sided_check(homeo, source, target, tc);
      entry["report"] = bvlab::io::to_json(rep);
      pass = pass && rep.passes();
      for (std::size_t r = 0; r < rep.ratios.size(); ++r) {
        t.rows.push_back({std::to_string(k), std::to_string(rep.resolutions[r]), bvlab::io::format_number(rep.forward[r]),
                          bvlab::io::format_number(rep.inverse[r]), bvlab::io::format_number(rep.ratios[r])});
        lo = std::min(lo, rep.ratios[r]);
        hi = std::max(hi, rep.ratios[r]);
      }
    } catch (const bvlab::Error& e) {
      if (e.code() != bvlab::ErrorCode::NotApplicable) throw;
      entry["not_applicable"] = e.what();
    }
    results.push_back(entry);
  }
  out.csv("ratios.csv", t);
  return {{"cases", results}, {"ratio_min", lo}, {"ratio_max", hi}, {"interval", {tc.lower, tc.upper}}};
}

bvlab::GridField named_field(const json& cfg, const std::string& name, std::size_t n) {
  const bvlab::Rect box{-1, -1, 1, 1};
  const auto lat = bvlab::Lattice::over(box, n);
  if (name == "ramp") return bvlab::GridField::sample(lat, [](bvlab::Point p) { return p.x; });
  if (name == "cone") return bvlab::GridField::sample(lat, [](bvlab::Point p) { return bvlab::norm(p); });
  if (name == "mollified-disk") {
    const double r = Fields{cfg}.get<double>("mollifier_radius", 0.1);
    const auto disk = bvlab::IndicatorSet::from_predicate(lat, [](bvlab::Point p) { return bvlab::norm(p) < 0.5; });
    return bvlab::mollify_indicator(disk, bvlab::WeightedPlane::uniform(1.0, box), r);
  }
  throw ConfigError("unknown field '" + name + "' (ramp, cone, mollified-disk, or a grid CSV path)");
}

json coarea_check(const json& cfg, Output& out, bool& pass) {
  const std::string name = Fields{cfg}.get<std::string>("field", "ramp");
  const auto sizes = increasing_sizes(cfg, "resolutions", {256, 512});
  const std::size_t levels = Fields{cfg}.get<std::size_t>("levels", 128);
  const double tol = Fields{cfg}.get<double>("tolerance", 0.05);
  if (levels == 0) throw ConfigError("'levels' must be positive");
  const bool from_file = name.find(".csv") != std::string::npos;
  pass = true;
  json runs = json::array();
  bvlab::io::CsvTable t;
  t.header = {"resolution", "lhs", "rhs", "relative_gap"};
  for (std::size_t n : from_file ? std::vector<std::size_t>{0} : sizes) {
    bvlab::GridField f = from_file ? bvlab::io::read_grid(name) : named_field(cfg, name, n);
    const auto plane = make_plane(cfg, "weight", "uniform:1", f.lattice.window());
    const auto r = bvlab::coarea_check(f, plane, levels);
    pass = pass && r.relative_gap() <= tol;
    json j = bvlab::io::to_json(r);
    j["resolution"] = std::max(f.lattice.nx, f.lattice.ny);
    runs.push_back(j);
    t.add_row({static_cast<double>(std::max(f.lattice.nx, f.lattice.ny)), r.lhs, r.rhs, r.relative_gap()});
  }
  out.csv("coarea.csv", t);
  return {{"field", name}, {"tolerance", tol}, {"runs", runs}};
}

json slice_check(const json& cfg, Output& out, bool& pass) {
  const auto sizes = increasing_sizes(cfg, "resolutions", {256, 512});
  const double tol = Fields{cfg}.get<double>("tolerance", 0.05);
  const std::string axis = Fields{cfg}.get<std::string>("axis", "both");
  if (axis != "x" && axis != "y" && axis != "both") throw ConfigError("'axis' must be x, y or both");
  std::vector<json> specs;
  if (cfg.contains("family")) {
    specs.push_back(cfg);
  } else {
    for (const auto& fam : bvlab::builtin_family_names()) specs.push_back({{"family", fam}});
  }
  pass = true;
  json runs = json::array();
  bvlab::io::CsvTable t;
  t.header = {"family", "resolution", "axis", "slice_integral", "full_variation"};
  for (const json& s : specs) {
    const auto homeo = make_homeo(s);
    for (std::size_t n : sizes) {
      const auto lat = bvlab::Lattice::over(homeo.source.bbox, n);
      const auto plane = make_plane(cfg, "weight", "uniform:1", lat.window());
      for (auto ax : {bvlab::SliceAxis::X, bvlab::SliceAxis::Y}) {
        const std::string an = ax == bvlab::SliceAxis::X ? "x" : "y";
        if (axis != "both" && axis != an) continue;
        const auto r = bvlab::slice_variation(homeo, plane, lat, ax, tol);
        pass = pass && r.holds();
        json j = bvlab::io::to_json(r);
        j["family"] = homeo.name;
        j["resolution"] = n;
        j["axis"] = an;
        runs.push_back(j);
        t.rows.push_back({homeo.name, std::to_string(n), an, bvlab::io::format_number(r.slice_integral),
                          bvlab::io::format_number(r.full_variation)});
      }
    }
  }
  out.csv("slices.csv", t);
  return {{"runs", runs}};
}

json jordan_demo(const json& cfg, Output& out, bool& pass) {
  const std::string region = Fields{cfg}.get<std::string>("region", "disk");
  bvlab::JordanRegion reg;
  if (region == "disk") reg = bvlab::disk_region({0, 0}, 0.5);
  else if (region == "square") reg = bvlab::square_region({0, 0}, 1.0);
  else if (region == "ellipse") reg = bvlab::ellipse_region({0, 0}, 0.6, 0.3);
  else throw ConfigError("unknown region '" + region + "' (disk, square, ellipse)");
  bvlab::PipelineConfig pc;
  pc.resolution = Fields{cfg}.get<std::size_t>("resolution", pc.resolution);
  pc.radii_in_spacings = Fields{cfg}.get<std::vector<double>>("radii_in_spacings", pc.radii_in_spacings);
  pc.level_count = Fields{cfg}.get<std::size_t>("levels", pc.level_count);
  pc.delta = Fields{cfg}.get<double>("delta", pc.delta);
  pc.constant = Fields{cfg}.get<double>("constant", pc.constant);
  if (pc.resolution < 16) throw ConfigError("'resolution' too small");
  const auto plane = make_plane(cfg, "weight", "uniform:1", pc.window);
  const auto run = bvlab::run_pipeline(reg, plane, pc);
  const auto g = bvlab::golab_check(run, Fields{cfg}.get<double>("tolerance", 0.05));
  pass = g.passes();
  bvlab::io::write_curve(out.dir / "target_curve.csv", run.target_curve);
  out.files.push_back("target_curve.csv");
  for (std::size_t s = 0; s < run.stages.size(); ++s)
    for (std::size_t c = 0; c < run.stages[s].component.size(); ++c) {
      const std::string name = "stage" + std::to_string(s) + "_chain" + std::to_string(c) + ".csv";
      bvlab::io::write_curve(out.dir / name, run.stages[s].component[c]);
      out.files.push_back(name);
    }
  return {{"run", bvlab::io::to_json(run)}, {"golab", bvlab::io::to_json(g)}};
}

json whitney_demo(const json& cfg, Output& out, bool& pass) {
  const std::string mask = Fields{cfg}.get<std::string>("mask", "square");
  const auto sizes = increasing_sizes(cfg, "resolutions", {128, 256, 512});
  std::function<bool(bvlab::Point)> inside;
  if (mask == "square") inside = [](bvlab::Point p) { return std::abs(p.x) < 0.5 && std::abs(p.y) < 0.5; };
  else if (mask == "annulus") inside = [](bvlab::Point p) { const double r = bvlab::norm(p); return r > 0.3 && r < 0.8; };
  else if (mask == "two-squares")
    inside = [](bvlab::Point p) {
      return std::abs(p.y) < 0.35 && ((p.x > -0.8 && p.x < -0.1) || (p.x > 0.1 && p.x < 0.8));
    };
  const bool from_file = !inside;
  if (from_file && mask.find(".csv") == std::string::npos)
    throw ConfigError("unknown mask '" + mask + "' (square, annulus, two-squares, or a mask CSV path)");
  pass = true;
  json runs = json::array();
  std::vector<std::size_t> max20;
  for (std::size_t n : from_file ? std::vector<std::size_t>{0} : sizes) {
    const auto G = from_file ? bvlab::io::read_mask(mask)
                             : bvlab::IndicatorSet::from_predicate(bvlab::Lattice::over({-1, -1, 1, 1}, n), inside);
    const auto cover = bvlab::build_cover(G);
    const bool disjoint = bvlab::vitali_disjoint(cover);
    const auto o1 = bvlab::overlap_bound(cover, 1), o5 = bvlab::overlap_bound(cover, 5),
               o20 = bvlab::overlap_bound(cover, 20);
    const bool inside20 = bvlab::dilates_inside(cover, 20);
    pass = pass && disjoint && o1.max_multiplicity == 1 && o5.min_multiplicity >= 1 && inside20;
    max20.push_back(o20.max_multiplicity);
    const std::string name = "cover_" + std::to_string(std::max(G.lattice.nx, G.lattice.ny)) + ".csv";
    bvlab::io::write_balls(out.dir / name, cover.balls);
    out.files.push_back(name);
    runs.push_back({{"resolution", std::max(G.lattice.nx, G.lattice.ny)},
                    {"balls", cover.vitali.size()},
                    {"vitali_disjoint", disjoint},
                    {"dilates_inside", inside20},
                    {"overlap", {bvlab::io::to_json(o1), bvlab::io::to_json(o5), bvlab::io::to_json(o20)}}});
  }
  json rep{{"mask", mask}, {"runs", runs}};
  if (max20.size() >= 2) {
    const auto a = max20[max20.size() - 2], b = max20.back();
    rep["dilation20_spread"] = a > b ? a - b : b - a;
  }
  return rep;
}

json ahlfors_fit(const json& cfg, Output& out, bool& pass) {
  const bvlab::Rect window = parse_window(cfg, "window", {-2, -2, 2, 2});
  const auto plane = make_plane(cfg, "density", "uniform:1", window);
  bvlab::SampleConfig sc;
  try {
    sc.radii = bvlab::geometric_ladder(Fields{cfg}.get<double>("rmin", 1e-4), Fields{cfg}.get<double>("rmax", 1.0),
                                       Fields{cfg}.get<std::size_t>("radii", 9));
  } catch (const bvlab::Error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& c : Fields{cfg}.get<std::vector<std::vector<double>>>("centers", {{0.0, 0.0}, {0.5, 0.0}, {0.0, -0.5}})) {
    if (c.size() != 2) throw ConfigError("'centers' entries need two coordinates");
    sc.centers.push_back({c[0], c[1]});
  }
  const auto rep = bvlab::ahlfors_fit(plane, sc, Fields{cfg}.get<double>("target_exponent", 2.0),
                                      Fields{cfg}.get<double>("frame_tolerance", 1e3));
  bvlab::io::CsvTable t;
  t.header = {"cx", "cy", "r", "measure"};
  for (const auto& s : rep.samples) t.add_row({s.center.x, s.center.y, s.radius, s.measure});
  out.csv("ball_measures.csv", t);
  pass = !cfg.contains("expect_regular") || Fields{cfg}.get<bool>("expect_regular", true) == rep.regular_2;
  return {{"ahlfors", bvlab::io::to_json(rep)}};
}

using Command = json (*)(const json&, Output&, bool&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for BV maps and homeomorphisms in weighted planes"};
  app.require_subcommand(1);
  std::string config_path, output_dir;
  app.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("-o,--output", output_dir, "output directory (also BVLAB_OUTPUT_DIR)");

  // Flag name → config key; only flags given on the command line override.
  std::map<std::string, std::string> str_flags;
  std::map<std::string, std::vector<double>> list_flags;
  std::map<std::string, double> num_flags;
  std::vector<std::string> params;

  struct Sub {
    std::string name;
    Command fn;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  auto add = [&](const std::string& name, const std::string& help, Command fn) {
    subs.push_back({name, fn, app.add_subcommand(name, help)});
    return subs.back().app;
  };
  auto s_opt = [&](CLI::App* a, const std::string& flag, const std::string& key, const std::string& help) {
    a->add_option_function<std::string>(flag, [&, key](const std::string& v) { str_flags[key] = v; }, help);
  };
  auto n_opt = [&](CLI::App* a, const std::string& flag, const std::string& key, const std::string& help) {
    a->add_option_function<double>(flag, [&, key](const double& v) { num_flags[key] = v; }, help);
  };
  auto l_opt = [&](CLI::App* a, const std::string& flag, const std::string& key, const std::string& help) {
    a->add_option_function<std::vector<double>>(flag, [&, key](const std::vector<double>& v) { list_flags[key] = v; },
                                                help)
        ->delimiter(',');
  };
  auto family_opts = [&](CLI::App* a) {
    s_opt(a, "--family", "family", "homeomorphism family");
    a->add_option("--param", params, "family parameter as key=value (repeatable)");
  };

  auto* ae = add("analyze-example", "forward and inverse variation with growth classification", analyze_example);
  family_opts(ae);
  s_opt(ae, "--source-weight", "source_weight", "source density spec");
  s_opt(ae, "--target-weight", "target_weight", "target density spec");
  l_opt(ae, "--eps", "eps", "ε schedule, comma separated");
  n_opt(ae, "--panels-per-decade", "panels_per_decade", "radial quadrature panels per decade");

  auto* vt = add("verify-theorem", "two-sided variation bound over a family sweep", verify_theorem);
  family_opts(vt);
  s_opt(vt, "--source-weight", "source_weight", "source density spec");
  s_opt(vt, "--target-weight", "target_weight", "target density spec");
  l_opt(vt, "--resolutions", "resolutions", "lattice sizes, comma separated");

  auto* cc = add("coarea-check", "total variation against the integral of level-set perimeters", coarea_check);
  s_opt(cc, "--field", "field", "ramp, cone, mollified-disk or a grid CSV");
  s_opt(cc, "--weight", "weight", "density spec");
  l_opt(cc, "--resolutions", "resolutions", "lattice sizes, comma separated");
  n_opt(cc, "--levels", "levels", "number of level samples");
  n_opt(cc, "--tolerance", "tolerance", "relative tolerance");

  auto* sl = add("slice-check", "slice integral against full variation", slice_check);
  family_opts(sl);
  s_opt(sl, "--weight", "weight", "density spec");
  s_opt(sl, "--axis", "axis", "x, y or both");
  l_opt(sl, "--resolutions", "resolutions", "lattice sizes, comma separated");

  auto* jd = add("jordan-demo", "mollify, select a level, extract the separating component", jordan_demo);
  s_opt(jd, "--region", "region", "disk, square or ellipse");
  s_opt(jd, "--weight", "weight", "density spec");
  n_opt(jd, "--resolution", "resolution", "lattice size");
  n_opt(jd, "--constant", "constant", "constant in the stage bound");

  auto* wd = add("whitney-demo", "Whitney-type ball cover with overlap counts", whitney_demo);
  s_opt(wd, "--mask", "mask", "square, annulus, two-squares or a mask CSV");
  l_opt(wd, "--resolutions", "resolutions", "lattice sizes, comma separated");

  auto* af = add("ahlfors-fit", "ball-measure regression against r^ν", ahlfors_fit);
  s_opt(af, "--density", "density", "density spec");
  n_opt(af, "--rmin", "rmin", "smallest radius");
  n_opt(af, "--rmax", "rmax", "largest radius");
  n_opt(af, "--target-exponent", "target_exponent", "exponent to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  const Sub* sub = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) sub = &s;

  json cfg = json::object();
  try {
    if (!config_path.empty()) {
      cfg = bvlab::io::read_json(config_path);
      if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    for (const auto& [k, v] : str_flags) cfg[k] = v;
    for (const auto& [k, v] : num_flags) cfg[k] = v;
    for (const auto& [k, v] : list_flags) {
      if (k == "resolutions") {
        json sizes = json::array();
        for (double x : v) {
          if (x < 1.0 || x != std::floor(x)) throw ConfigError("resolutions must be positive integers");
          sizes.push_back(static_cast<std::size_t>(x));
        }
        cfg[k] = sizes;
      } else {
        cfg[k] = v;
      }
    }
    for (const std::string& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + p + "'");
      cfg["params"][p.substr(0, eq)] = bvlab::io::parse_number(p.substr(eq + 1));
    }
    for (const char* key : {"resolution", "levels", "panels_per_decade", "radii"})
      if (cfg.contains(key) && cfg[key].is_number_float()) {
        const double x = cfg[key].get<double>();
        if (x < 1.0 || x != std::floor(x)) throw ConfigError(std::string("'") + key + "' must be a positive integer");
        cfg[key] = static_cast<std::size_t>(x);
      }
  } catch (const ConfigError& e) {
    std::cerr << "bvlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const bvlab::Error& e) {
    std::cerr << "bvlab: config error: " << e.what() << "\n";
    return kExitConfig;
  }

  fs::path dir = "bvlab-out";
  if (cfg.contains("output_dir") && cfg["output_dir"].is_string()) dir = cfg["output_dir"].get<std::string>();
  if (const char* env = std::getenv("BVLAB_OUTPUT_DIR"); env && *env) dir = env;
  if (!output_dir.empty()) dir = output_dir;
  cfg.erase("output_dir");

  Output out{dir / sub->name, {}};
  bool pass = false;
  json body;
  try {
    std::error_code ec;
    fs::create_directories(out.dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out.dir.string() + ": " + ec.message());
    body = sub->fn(cfg, out, pass);
  } catch (const ConfigError& e) {
    std::cerr << "bvlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const bvlab::Error& e) {
    std::cerr << "bvlab: " << sub->name << ": contract '" << bvlab::to_string(e.code()) << "' failed: " << e.what()
              << "\n";
    return kExitPrecondition;
  }

  json report{{"command", sub->name},
              {"config", cfg},
              {"config_hash", bvlab::io::config_hash(cfg)},
              {"convention", bvlab::kVariationConvention},
              {"passed", pass},
              {"files", out.files},
              {"result", body}};
  try {
    bvlab::io::write_json(out.dir / "report.json", report);
  } catch (const bvlab::Error& e) {
    std::cerr << "bvlab: " << e.what() << "\n";
    return kExitPrecondition;
  }
  std::cout << sub->name << ": " << (pass ? "pass" : "FAIL") << " (" << (out.dir / "report.json").string() << ")\n";
  return pass ? kExitPass : kExitFail;
}
