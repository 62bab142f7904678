#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bvlab/bv_scalar.hpp"
#include "bvlab/curves.hpp"
#include "bvlab/error.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/hausdorff.hpp"
#include "bvlab/homeo.hpp"
#include "bvlab/homeo_lab.hpp"
#include "bvlab/jordan.hpp"
#include "bvlab/metric_bv.hpp"
#include "bvlab/report.hpp"
#include "bvlab/weighted_plane.hpp"
#include "bvlab/whitney.hpp"

namespace bvlab::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Write through a temporary sibling and rename into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  require(!ec, ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

/// 64-bit FNV-1a of the canonical (key-sorted, compact) dump, as 16 hex digits.
inline std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values) {
    std::vector<std::string> r;
    for (double v : values) r.push_back(format_number(v));
    rows.push_back(std::move(r));
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + csv_field(cells[k]);
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

/// RFC-4180 parser: quoted fields, doubled quotes, CRLF or LF line ends.
inline CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"' && k + 1 < text.size() && text[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') ++k;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        lines.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  require(!quoted, ErrorCode::InvalidArgument, "unterminated quoted CSV field");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    lines.push_back(std::move(row));
  }
  require(!lines.empty(), ErrorCode::InvalidArgument, "CSV has no header row");
  CsvTable t;
  t.header = std::move(lines.front());
  t.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
  return t;
}

inline double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    require(used == s.size(), ErrorCode::InvalidArgument, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  }
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) { return csv.string() + ".json"; }

// ---------------------------------------------------------------------------
// Grids, masks, curves, covers, sampled maps
// ---------------------------------------------------------------------------

inline json lattice_json(const Lattice& lat) {
  return {{"origin", {lat.origin.x, lat.origin.y}}, {"spacing", lat.spacing}, {"nx", lat.nx}, {"ny", lat.ny}};
}

inline Lattice lattice_from_json(const json& j) {
  try {
    Lattice lat;
    lat.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
    lat.spacing = j.at("spacing").get<double>();
    lat.nx = j.at("nx").get<std::size_t>();
    lat.ny = j.at("ny").get<std::size_t>();
    lat.validate();
    return lat;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad lattice sidecar: ") + e.what());
  }
}

/// Row j of the matrix holds nodes (0..nx-1, j); the header names the columns.
inline void write_grid(const std::filesystem::path& path, const GridField& f) {
  const Lattice& lat = f.lattice;
  CsvTable t;
  for (std::size_t i = 0; i < lat.nx; ++i) t.header.push_back("i" + std::to_string(i));
  for (std::size_t j = 0; j < lat.ny; ++j) {
    std::vector<double> r;
    for (std::size_t i = 0; i < lat.nx; ++i) r.push_back(f.at(i, j));
    t.add_row(r);
  }
  atomic_write(path, t.str());
  write_json(sidecar_path(path), lattice_json(lat));
}

inline GridField read_grid(const std::filesystem::path& path) {
  const Lattice lat = lattice_from_json(read_json(sidecar_path(path)));
  const CsvTable t = parse_csv(read_file(path));
  require(t.rows.size() == lat.ny, ErrorCode::InvalidArgument, "grid CSV row count does not match its sidecar");
  std::vector<double> v(lat.size());
  for (std::size_t j = 0; j < lat.ny; ++j) {
    require(t.rows[j].size() == lat.nx, ErrorCode::InvalidArgument, "grid CSV column count does not match its sidecar");
    for (std::size_t i = 0; i < lat.nx; ++i) v[lat.index(i, j)] = parse_number(t.rows[j][i]);
  }
  return GridField(lat, std::move(v));
}

inline void write_mask(const std::filesystem::path& path, const IndicatorSet& s) { write_grid(path, s.as_field()); }

inline IndicatorSet read_mask(const std::filesystem::path& path) {
  const GridField f = read_grid(path);
  IndicatorSet s;
  s.lattice = f.lattice;
  for (double v : f.values) {
    require(v == 0.0 || v == 1.0, ErrorCode::InvalidArgument, "mask entries must be 0 or 1");
    s.mask.push_back(v == 1.0 ? 1 : 0);
  }
  return s;
}

inline void write_curve(const std::filesystem::path& path, const PolylineCurve& c) {
  CsvTable t;
  t.header = {"x", "y"};
  for (Point p : c.points) t.add_row({p.x, p.y});
  atomic_write(path, t.str());
  write_json(sidecar_path(path), json{{"closed", c.closed}, {"points", c.points.size()}});
}

inline PolylineCurve read_curve(const std::filesystem::path& path) {
  const json side = read_json(sidecar_path(path));
  const CsvTable t = parse_csv(read_file(path));
  require(t.header.size() == 2, ErrorCode::InvalidArgument, "curve CSV needs columns x,y");
  PolylineCurve c;
  c.closed = side.value("closed", false);
  for (const auto& r : t.rows) {
    require(r.size() == 2, ErrorCode::InvalidArgument, "curve CSV rows need two fields");
    c.points.push_back({parse_number(r[0]), parse_number(r[1])});
  }
  c.validate();
  return c;
}

inline void write_balls(const std::filesystem::path& path, const std::vector<Ball>& balls) {
  CsvTable t;
  t.header = {"cx", "cy", "r"};
  for (const Ball& b : balls) t.add_row({b.center.x, b.center.y, b.radius});
  atomic_write(path, t.str());
}

inline std::vector<Ball> read_balls(const std::filesystem::path& path) {
  const CsvTable t = parse_csv(read_file(path));
  std::vector<Ball> out;
  for (const auto& r : t.rows) {
    require(r.size() == 3, ErrorCode::InvalidArgument, "ball CSV rows need cx,cy,r");
    out.push_back({{parse_number(r[0]), parse_number(r[1])}, parse_number(r[2])});
  }
  return out;
}

/// Components go to `<stem>_u.csv` and `<stem>_v.csv`, each with a sidecar.
inline void write_map(const std::filesystem::path& stem, const MapField& m) {
  write_grid(stem.string() + "_u.csv", m.u);
  write_grid(stem.string() + "_v.csv", m.v);
}

inline MapField read_map(const std::filesystem::path& stem) {
  return MapField(read_grid(stem.string() + "_u.csv"), read_grid(stem.string() + "_v.csv"));
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

inline json density_json(const Density& d) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UniformDensity>) return {{"family", "uniform"}, {"value", x.value}};
        else if constexpr (std::is_same_v<T, RadialPowerDensity>)
          return {{"family", "radial_power"}, {"exponent", x.exponent}, {"scale", x.scale}};
        else if constexpr (std::is_same_v<T, OscillatingDensity>)
          return {{"family", "oscillating"}, {"base", x.base}, {"amplitude", x.amplitude}, {"frequency", x.frequency}};
        else
          return {{"family", "tabulated"}, {"scale", x.scale}, {"lattice", lattice_json(x.table->lattice)}};
      },
      d);
}

/// A density from a config object: {"family": "uniform", "value": c},
/// {"family": "radial_power", "exponent": ν}, {"family": "oscillating", ...}
/// or {"family": "tabulated", "path": "grid.csv"}.
inline Density parse_density(const json& j) {
  require(j.is_object() && j.contains("family"), ErrorCode::InvalidArgument, "density needs a 'family' field");
  const std::string fam = j.at("family").get<std::string>();
  try {
    if (fam == "uniform") return UniformDensity{j.value("value", 1.0)};
    if (fam == "radial_power") return RadialPowerDensity{j.at("exponent").get<double>(), j.value("scale", 1.0)};
    if (fam == "oscillating") {
      OscillatingDensity d;
      d.base = j.value("base", d.base);
      d.amplitude = j.value("amplitude", d.amplitude);
      d.frequency = j.value("frequency", d.frequency);
      return d;
    }
    if (fam == "tabulated")
      return TabulatedDensity{std::make_shared<const GridField>(read_grid(j.at("path").get<std::string>())),
                              j.value("scale", 1.0)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "bad " + fam + " density: " + e.what());
  }
  throw Error(ErrorCode::InvalidArgument, "unknown density family '" + fam + "'");
}

/// Short form `family[:arg[,arg...]]`: uniform:2, radial_power:-1.5,
/// oscillating:1.25,0.75,3, tabulated:path.csv. A string starting with '{'
/// is read as JSON.
inline Density parse_density(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') {
    try {
      return parse_density(json::parse(spec));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("malformed density JSON: ") + e.what());
    }
  }
  const auto colon = spec.find(':');
  const std::string fam = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  json j{{"family", fam}};
  if (fam == "tabulated") {
    j["path"] = rest;
    return parse_density(j);
  }
  std::vector<double> args;
  std::stringstream ss(rest);
  for (std::string tok; std::getline(ss, tok, ',');) args.push_back(parse_number(tok));
  if (fam == "uniform" && !args.empty()) j["value"] = args[0];
  if (fam == "radial_power") {
    require(!args.empty(), ErrorCode::InvalidArgument, "radial_power needs an exponent");
    j["exponent"] = args[0];
    if (args.size() > 1) j["scale"] = args[1];
  }
  if (fam == "oscillating") {
    const char* keys[] = {"base", "amplitude", "frequency"};
    for (std::size_t k = 0; k < args.size() && k < 3; ++k) j[keys[k]] = args[k];
  }
  return parse_density(j);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const VariationReport& r) {
  json j{{"value", r.value},
         {"infinite", r.infinite},
         {"spacing", r.spacing},
         {"resolution", r.resolution},
         {"error_estimate", r.error_estimate},
         {"excluded_nodes", r.excluded_nodes},
         {"degenerate", r.degenerate},
         {"convention", r.convention}};
  if (!r.epsilon_schedule.empty()) {
    j["epsilon_schedule"] = r.epsilon_schedule;
    j["per_epsilon_values"] = r.per_epsilon_values;
    j["growth_class"] = to_string(r.growth_class);
    j["growth_rate"] = r.growth_rate;
    j["growth_exponent"] = r.growth_exponent;
    j["fit_quality"] = r.fit_quality;
  }
  return j;
}

inline json to_json(const TwoSidedReport& r) {
  return {{"resolutions", r.resolutions}, {"forward", r.forward},     {"inverse", r.inverse},
          {"ratios", r.ratios},           {"ratio", r.ratio()},       {"cauchy", r.cauchy},
          {"in_interval", r.in_interval}, {"target_min", r.target_min}, {"target_max", r.target_max},
          {"passes", r.passes()},         {"convention", kVariationConvention}};
}

inline json to_json(const CoareaResult& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"relative_gap", r.relative_gap()}, {"levels", r.levels},
          {"perimeters", r.perimeters}};
}

inline json to_json(const SliceResult& r) {
  return {{"slice_integral", r.slice_integral}, {"full_variation", r.full_variation}, {"tolerance", r.tolerance},
          {"holds", r.holds()}, {"convention", kVariationConvention}};
}

inline json to_json(const AhlforsReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"center", {s.center.x, s.center.y}}, {"radius", s.radius}, {"measure", s.measure}});
  return {{"target_exponent", r.target_exponent}, {"nu_hat", r.nu_hat},   {"fit_r2", r.fit_r2},
          {"c_lower", r.c_lower},                 {"c_upper", r.c_upper}, {"frame_ratio_2", r.frame_ratio_2},
          {"frame_tolerance", r.frame_tolerance}, {"regular_2", r.regular_2}, {"flagged", r.flagged},
          {"samples", samples}};
}

inline json to_json(const CoverEstimate& c) {
  json balls = json::array();
  for (const Ball& b : c.cover) balls.push_back({b.center.x, b.center.y, b.radius});
  return {{"value", c.value}, {"delta", c.delta}, {"normalization", c.normalization}, {"cover", balls}};
}

inline json to_json(const OverlapReport& r) {
  return {{"dilation", r.dilation}, {"max_multiplicity", r.max_multiplicity},
          {"min_multiplicity", r.min_multiplicity}, {"radius_ratio", r.radius_ratio}};
}

inline json to_json(const GolabReport& r) {
  return {{"h1_gamma", r.h1_gamma},
          {"min_component_length", r.min_component_length},
          {"final_hausdorff", r.final_hausdorff},
          {"spacing", r.spacing},
          {"tolerance", r.tolerance},
          {"hausdorff_decreasing", r.hausdorff_decreasing},
          {"hausdorff_fine", r.hausdorff_fine},
          {"golab_inequality", r.golab_inequality},
          {"stage_bounds", r.stage_bounds},
          {"markers_clear", r.markers_clear},
          {"passes", r.passes()}};
}

inline json to_json(const PipelineRun& run) {
  json stages = json::array();
  for (const auto& s : run.stages)
    stages.push_back({{"radius", s.radius},
                      {"level", s.level},
                      {"level_length", s.level_length},
                      {"mean_level_length", s.mean_level_length},
                      {"lipschitz_budget", s.lipschitz_budget},
                      {"component_length", s.component_length},
                      {"hausdorff", s.hausdorff},
                      {"markers_clear", s.markers_clear},
                      {"component_chains", s.component.size()}});
  return {{"region", run.region_name},
          {"spacing", run.spacing},
          {"region_perimeter", run.region_perimeter},
          {"constant", run.constant},
          {"markers", {{run.marker_inside.x, run.marker_inside.y}, {run.marker_outside.x, run.marker_outside.y}}},
          {"stages", stages}};
}

}  // namespace bvlab::io
