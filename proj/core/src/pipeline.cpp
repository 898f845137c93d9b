#include "wsskit/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wsskit/centerline.hpp"
#include "wsskit/format.hpp"
#include "wsskit/mesh_io.hpp"
#include "wsskit/vtk.hpp"
#include "wsskit/wss.hpp"

#ifndef WSSKIT_VERSION
#define WSSKIT_VERSION "unknown"
#endif

namespace wsskit {

std::string_view version() { return WSSKIT_VERSION; }

namespace {

[[noreturn]] void config_error(std::string_view key, const std::string& why) {
  fail(Errc::config, "config key '" + std::string(key) + "': " + why);
}

double positive(std::string_view key, std::string_view value) {
  double v = 0.0;
  try {
    v = parse_double(value, key);
  } catch (const Error& e) {
    config_error(key, e.what());
  }
  if (!(v > 0.0)) config_error(key, "must be > 0");
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

FlowRegion parse_flow_vector(std::string_view text) {
  const auto colon = text.find(':');
  FlowRegion r;
  try {
    if (colon == std::string_view::npos) {
      r.v = parse_vec3(text);
    } else {
      r.label = static_cast<int>(parse_integer(text.substr(0, colon), "region label"));
      r.v = parse_vec3(text.substr(colon + 1));
    }
  } catch (const Error& e) {
    config_error("flow_vector", e.what());
  }
  if (norm(r.v) == 0.0) config_error("flow_vector", "vector must be non-zero");
  return r;
}

std::string indicator_file_stem(IndicatorKind k) {
  std::string s(indicator_name(k));
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e);
  } catch (const std::exception& e) {
    throw PipelineError(name, Error(Errc::io, e.what()));
  }
}

}  // namespace

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value, const std::filesystem::path& base) {
  value = trim(value);
  if (key == "mesh") {
    c.mesh = resolve(base, value);
  } else if (key == "series") {
    c.series = resolve(base, value);
  } else if (key == "centerline") {
    c.centerline = resolve(base, value);
  } else if (key == "output") {
    c.output = resolve(base, value);
  } else if (key == "window") {
    try {
      c.window = parse_window(value);
    } catch (const Error& e) {
      config_error(key, e.what());
    }
  } else if (key == "tangents") {
    if (value == "projected")
      c.tangents = TangentMethod::projected;
    else if (value == "flipped")
      c.tangents = TangentMethod::flipped;
    else
      config_error(key, "expected projected or flipped");
  } else if (key == "flow_vector") {
    c.flow_vectors.push_back(parse_flow_vector(value));
  } else if (key == "indicators") {
    c.indicators.clear();
    try {
      for (const auto& name : split(value, ',')) c.indicators.push_back(parse_indicator_kind(trim(name)));
    } catch (const Error& e) {
      config_error(key, e.what());
    }
  } else if (key == "projection_neighbors") {
    const double n = positive(key, value);
    if (n != static_cast<double>(static_cast<std::size_t>(n))) config_error(key, "must be a positive integer");
    c.projection_neighbors = static_cast<std::size_t>(n);
  } else if (key == "projection_tolerance") {
    c.projection_tolerance = positive(key, value);
  } else if (key == "flip_tolerance") {
    c.flip_tolerance = positive(key, value);
  } else if (key == "zero_shear_tolerance") {
    c.zero_shear = positive(key, value);
  } else if (key == "quadrature") {
    if (value != "trapezoid") config_error(key, "only trapezoid is supported");
  } else {
    config_error(key, "unknown key");
  }
}

PipelineConfig read_pipeline_config(std::istream& in, const std::filesystem::path& base) {
  PipelineConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail(Errc::config, "config line " + std::to_string(line_no) + ": expected key = value");
    apply_setting(c, trim(text.substr(0, eq)), text.substr(eq + 1), base);
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config, "cannot open config " + path.string());
  return read_pipeline_config(in, path.parent_path());
}

std::string canonical_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "mesh = " << c.mesh.generic_string() << '\n';
  out << "series = " << c.series.generic_string() << '\n';
  out << "centerline = " << c.centerline.generic_string() << '\n';
  out << "window = "
      << (c.window ? format_roundtrip(c.window->begin) + ":" + format_roundtrip(c.window->end) : std::string("full"))
      << '\n';
  out << "tangents = " << tangent_method_name(c.tangents) << '\n';
  for (const auto& r : c.flow_vectors)
    out << "flow_vector = " << r.label << ':' << format_roundtrip(r.v.x) << ',' << format_roundtrip(r.v.y) << ','
        << format_roundtrip(r.v.z) << '\n';
  out << "indicators = ";
  for (std::size_t i = 0; i < c.indicators.size(); ++i) out << (i ? "," : "") << indicator_name(c.indicators[i]);
  out << '\n';
  out << "projection_neighbors = " << c.projection_neighbors << '\n';
  out << "projection_tolerance = " << format_roundtrip(c.projection_tolerance) << '\n';
  out << "flip_tolerance = " << format_roundtrip(c.flip_tolerance) << '\n';
  out << "zero_shear_tolerance = " << format_roundtrip(c.zero_shear) << '\n';
  out << "quadrature = trapezoid\n";
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  auto record = [&](const char* name, std::size_t flagged) { result.flags.push_back({name, flagged}); };

  stage("config", [&] {
    if (config.series.empty()) fail(Errc::config, "no series manifest given");
    if (config.tangents == TangentMethod::projected && config.centerline.empty())
      fail(Errc::config, "projected tangents need a centerline");
    if (config.tangents == TangentMethod::flipped && config.flow_vectors.empty() && config.centerline.empty())
      fail(Errc::config, "flipped tangents need flow vectors or a centerline");
    if (config.indicators.empty()) fail(Errc::config, "no indicators requested");
    if (!(config.projection_tolerance > 0.0 && config.flip_tolerance > 0.0 && config.zero_shear > 0.0))
      fail(Errc::config, "tolerances must be > 0");
  });

  auto manifest = stage("series", [&] { return read_manifest(config.series); });
  const auto mesh_path = config.mesh.empty() ? manifest.mesh : config.mesh;
  const auto mesh = stage("mesh", [&] {
    if (mesh_path.empty()) fail(Errc::config, "no mesh given and the series manifest names none");
    return load_surface_mesh(mesh_path);
  });
  auto traction = stage("series", [&] {
    auto loaded = load_series(config.series, static_cast<long long>(mesh.vertex_count()));
    if (config.window) loaded.series.set_window(config.window);
    if (loaded.series.kind() == FieldKind::scalar)
      fail(Errc::kind_mismatch, "pipeline input must be a traction or stress series");
    return std::move(loaded.series);
  });
  const auto normals = vertex_normals(mesh);
  if (traction.kind() == FieldKind::stress_tensor)
    traction = stage("traction", [&] { return traction_from_stress(traction, normals); });

  const auto tangents = stage("tangents", [&] {
    std::optional<Centerline> cl;
    if (!config.centerline.empty()) cl = load_centerline(config.centerline);
    ProjectionOptions popt;
    popt.neighbors = config.projection_neighbors;
    popt.tolerance = config.projection_tolerance;
    if (config.tangents == TangentMethod::projected) return project_centerline_tangents(mesh, *cl, popt);
    std::vector<int> labels(mesh.region_labels().begin(), mesh.region_labels().end());
    if (cl) labels = project_centerline_tangents(mesh, *cl, popt).regions;
    const auto regions = config.flow_vectors.empty() ? section_flow_vectors(*cl) : config.flow_vectors;
    const auto basis = automatic_tangent_basis(mesh);
    return flip_tangents(basis.second, labels, regions, config.flip_tolerance);
  });
  record("tangents", tangents.degenerate_count());

  const auto wss = stage("wss", [&] { return wss_vector(traction, normals); });
  const auto wss_l = stage("wss", [&] { return wss_longitudinal(traction, tangents); });
  record("wss", static_cast<std::size_t>(std::count_if(wss_l.mask().begin(), wss_l.mask().end(), [](std::uint8_t m) { return m != 0; })));

  std::vector<IndicatorField> fields;
  stage("indicators", [&] {
    for (auto kind : config.indicators) {
      switch (kind) {
        case IndicatorKind::osi: fields.push_back(osi_vector(wss, std::nullopt, config.zero_shear)); break;
        case IndicatorKind::osi_longitudinal:
          fields.push_back(osi_longitudinal(wss_l, std::nullopt, config.zero_shear));
          break;
        case IndicatorKind::tawss: fields.push_back(tawss(wss, std::nullopt, config.zero_shear)); break;
        case IndicatorKind::mean_wss_longitudinal: fields.push_back(temporal_mean(wss_l)); break;
      }
    }
  });
  for (const auto& f : fields) result.flags.push_back({"indicators/" + std::string(indicator_name(f.indicator)), f.flagged_count()});

  stage("export", [&] {
    std::filesystem::create_directories(config.output);
    auto add = [&](const std::filesystem::path& p) { result.files.push_back(p); };
    const auto tangent_path = config.output / "tangents.csv";
    save_tangents(tangent_path, tangents);
    add(tangent_path);
    std::vector<PointField> point_data;
    for (const auto& f : fields) {
      const auto p = config.output / (indicator_file_stem(f.indicator) + ".csv");
      save_indicator_csv(p, f);
      add(p);
      point_data.push_back(scalar_field(std::string(indicator_name(f.indicator)), f.values));
    }
    point_data.push_back(vector_field("t_l", tangents.vectors));
    const auto vtk_path = config.output / "wall.vtk";
    export_vtk(vtk_path, mesh, point_data, "wsskit indicators");
    add(vtk_path);

    const auto log_path = config.output / "run.log";
    std::ofstream log(log_path, std::ios::binary);
    if (!log) fail(Errc::io, "cannot write " + log_path.string());
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config(config))));
    const auto w = traction.effective_window();
    log << "wsskit " << version() << '\n';
    log << "config_hash = " << hash << '\n';
    log << "vertices = " << mesh.vertex_count() << '\n';
    log << "time_samples = " << traction.time_count() << '\n';
    log << "window = " << format_roundtrip(w.begin) << ':' << format_roundtrip(w.end) << '\n';
    log << "tangent_method = " << tangent_method_name(tangents.method) << '\n';
    for (const auto& s : result.flags) log << "flagged[" << s.stage << "] = " << s.flagged << '\n';
    for (const auto& f : result.files) log << "output = " << f.filename().generic_string() << '\n';
    add(log_path);
  });
  return result;
}

}  // namespace wsskit
