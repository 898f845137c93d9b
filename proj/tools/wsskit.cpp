#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wsskit/centerline.hpp"
#include "wsskit/convergence.hpp"
#include "wsskit/error.hpp"
#include "wsskit/field_series.hpp"
#include "wsskit/format.hpp"
#include "wsskit/indicators.hpp"
#include "wsskit/mesh_io.hpp"
#include "wsskit/pipeline.hpp"
#include "wsskit/synthetic.hpp"
#include "wsskit/tangent_fields.hpp"
#include "wsskit/vtk.hpp"
#include "wsskit/wss.hpp"

namespace fs = std::filesystem;
using namespace wsskit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

SeriesFormat parse_format(const std::string& s) {
  if (s == "csv") return SeriesFormat::csv;
  if (s == "binary") return SeriesFormat::binary;
  fail(Errc::bad_argument, "--format must be csv or binary");
}

CapStyle parse_caps(const std::string& s) {
  if (s == "none") return CapStyle::none;
  if (s == "flat") return CapStyle::flat;
  if (s == "dome") return CapStyle::dome;
  fail(Errc::bad_argument, "--caps must be none, flat or dome");
}

std::vector<double> uniform_times(double t0, double t1, std::size_t samples) {
  if (samples < 2 || !(t1 > t0)) fail(Errc::bad_argument, "need t1 > t0 and at least two samples");
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i)
    t[i] = i + 1 == samples ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
  return t;
}

fs::path mesh_reference(const fs::path& mesh, const fs::path& dir) { return fs::proximate(mesh, dir); }

struct SeriesInput {
  SurfaceMesh mesh;
  fs::path mesh_path;
  WallFieldSeries series;
};

// Loads a series manifest together with its mesh (an explicit mesh wins).
SeriesInput load_series_input(const fs::path& manifest, const std::string& mesh_override) {
  SeriesInput in;
  const auto m = read_manifest(manifest);
  in.mesh_path = mesh_override.empty() ? m.mesh : fs::path(mesh_override);
  if (in.mesh_path.empty()) fail(Errc::config, "series manifest names no mesh; pass --mesh");
  in.mesh = load_surface_mesh(in.mesh_path);
  in.series = load_series(manifest, static_cast<long long>(in.mesh.vertex_count())).series;
  return in;
}

WallFieldSeries as_traction(const SeriesInput& in) {
  if (in.series.kind() == FieldKind::stress_tensor) return traction_from_stress(in.series, vertex_normals(in.mesh));
  if (in.series.kind() != FieldKind::traction_vector)
    fail(Errc::kind_mismatch, "expected a traction or stress series");
  return in.series;
}

void print_written(const fs::path& p) { std::cout << "wrote " << p.generic_string() << '\n'; }

// ---- synth -----------------------------------------------------------------

void add_synth(CLI::App& app, std::function<void()>& action) {
  auto* synth = app.add_subcommand("synth", "Generate synthetic geometries and traction series");
  synth->require_subcommand(1);

  {
    auto* cmd = synth->add_subcommand("cylinder", "Cylinder surface mesh along +z");
    auto opt = std::make_shared<std::tuple<double, double, std::size_t, std::size_t, std::string, std::string>>(
        3.0, 40.0, 64, 128, "none", "");
    auto& [R, L, nt, nz, caps, out] = *opt;
    cmd->add_option("--radius", R, "Radius (mm)")->capture_default_str();
    cmd->add_option("--length", L, "Length (mm)")->capture_default_str();
    cmd->add_option("--ntheta", nt, "Vertices per ring")->capture_default_str();
    cmd->add_option("--nz", nz, "Number of rings")->capture_default_str();
    cmd->add_option("--caps", caps, "none, flat or dome")->capture_default_str();
    cmd->add_option("--out", out, "Output OFF file")->required();
    cmd->callback([&action, opt] {
      action = [opt] {
        auto& [R, L, nt, nz, caps, out] = *opt;
        save_off(out, make_cylinder_mesh(R, L, nt, nz, parse_caps(caps)));
        print_written(out);
      };
    });
  }
  {
    auto* cmd = synth->add_subcommand("yjunction", "Blended Y-junction surface mesh");
    auto p = std::make_shared<YJunctionParams>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--trunk-radius", p->trunk_R)->capture_default_str();
    cmd->add_option("--branch-radius1", p->branch_R1)->capture_default_str();
    cmd->add_option("--branch-radius2", p->branch_R2)->capture_default_str();
    cmd->add_option("--angle", p->angle_deg, "Opening angle (degrees)")->capture_default_str();
    cmd->add_option("--trunk-length", p->trunk_length)->capture_default_str();
    cmd->add_option("--branch-length", p->branch_length)->capture_default_str();
    cmd->add_option("--cell", p->cell, "Sampling grid spacing (mm)")->capture_default_str();
    cmd->add_option("--blend", p->blend, "Smooth-union radius (mm)")->capture_default_str();
    cmd->add_option("--out", *out, "Output OFF file")->required();
    cmd->callback([&action, p, out] {
      action = [p, out] {
        save_off(*out, make_y_junction_mesh(*p));
        print_written(*out);
        const auto ends = y_junction_ends(*p);
        std::cout << "trunk end " << format_roundtrip(ends[0].x) << ',' << format_roundtrip(ends[0].y) << ','
                  << format_roundtrip(ends[0].z) << '\n';
        for (int b = 1; b <= 2; ++b)
          std::cout << "branch " << b << " end " << format_roundtrip(ends[b].x) << ',' << format_roundtrip(ends[b].y)
                    << ',' << format_roundtrip(ends[b].z) << '\n';
      };
    });
  }
  {
    auto* cmd = synth->add_subcommand("poiseuille", "Steady Poiseuille traction (or stress) series on a cylinder");
    struct Opts {
      PoiseuilleParams params;
      std::string mesh;
      double length = 40.0;
      std::size_t ntheta = 64, nz = 128;
      double t0 = 0.0, t1 = 1.0;
      std::size_t samples = 11;
      bool stress = false;
      std::string format = "csv";
      std::string out_dir;
      std::string stem = "traction";
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--mesh", o->mesh, "Existing cylinder mesh (default: generate an open one)");
    cmd->add_option("--radius", o->params.R, "Radius (mm)")->capture_default_str();
    cmd->add_option("--length", o->length, "Generated length (mm)")->capture_default_str();
    cmd->add_option("--ntheta", o->ntheta)->capture_default_str();
    cmd->add_option("--nz", o->nz)->capture_default_str();
    cmd->add_option("--flow", o->params.Q, "Flow rate (ml/s)")->capture_default_str();
    cmd->add_option("--viscosity", o->params.mu, "Dynamic viscosity (Pa s)")->capture_default_str();
    cmd->add_option("--pressure", o->params.pressure, "Normal traction (N/m^2)")->capture_default_str();
    cmd->add_option("--t0", o->t0)->capture_default_str();
    cmd->add_option("--t1", o->t1)->capture_default_str();
    cmd->add_option("--samples", o->samples)->capture_default_str();
    cmd->add_flag("--stress", o->stress, "Write the stress tensor instead of the traction");
    cmd->add_option("--format", o->format, "csv or binary")->capture_default_str();
    cmd->add_option("--stem", o->stem)->capture_default_str();
    cmd->add_option("--out-dir", o->out_dir)->required();
    cmd->callback([&action, o] {
      action = [o] {
        fs::create_directories(o->out_dir);
        fs::path mesh_path = o->mesh;
        if (mesh_path.empty()) {
          mesh_path = fs::path(o->out_dir) / "cylinder.off";
          save_off(mesh_path, make_cylinder_mesh(o->params.R, o->length, o->ntheta, o->nz, CapStyle::none));
          print_written(mesh_path);
        }
        const auto mesh = load_surface_mesh(mesh_path);
        const auto times = uniform_times(o->t0, o->t1, o->samples);
        const auto series = o->stress ? poiseuille_stress(mesh, o->params, times)
                                      : poiseuille_traction(mesh, o->params, times);
        print_written(save_series(o->out_dir, o->stem, series, mesh_reference(mesh_path, o->out_dir),
                                  parse_format(o->format)));
        std::cout << "wall shear " << format_roundtrip(poiseuille_wall_shear(o->params.Q, o->params.mu, o->params.R))
                  << " N/m^2\n";
      };
    });
  }
  {
    auto* cmd = synth->add_subcommand("pulse", "Scale a traction series by a flow waveform");
    struct Opts {
      std::string series, waveform, out_dir, stem = "pulse", format = "csv";
      double q_ref = 7.9;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--series", o->series, "Traction series manifest")->required();
    cmd->add_option("--waveform", o->waveform, "CSV of t,q samples")->required();
    cmd->add_option("--qref", o->q_ref, "Flow rate of the input series (ml/s)")->capture_default_str();
    cmd->add_option("--format", o->format)->capture_default_str();
    cmd->add_option("--stem", o->stem)->capture_default_str();
    cmd->add_option("--out-dir", o->out_dir)->required();
    cmd->callback([&action, o] {
      action = [o] {
        const auto in = load_series_input(o->series, "");
        const auto scaled = pulsatile_scale(in.series, vertex_normals(in.mesh), load_waveform(o->waveform), o->q_ref);
        fs::create_directories(o->out_dir);
        print_written(
            save_series(o->out_dir, o->stem, scaled, mesh_reference(in.mesh_path, o->out_dir), parse_format(o->format)));
      };
    });
  }
}

// ---- centerline ------------------------------------------------------------

void add_centerline(CLI::App& app, std::function<void()>& action) {
  auto* cl = app.add_subcommand("centerline", "Centerline extraction");
  cl->require_subcommand(1);
  auto* cmd = cl->add_subcommand("extract", "Extract a centerline between a source and target points");
  struct Opts {
    std::string mesh, source, out;
    std::vector<std::string> targets;
    CenterlineOptions options;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--mesh", o->mesh, "Closed surface mesh")->required();
  cmd->add_option("--source", o->source, "x,y,z")->required();
  cmd->add_option("--target", o->targets, "x,y,z (repeatable)")->required();
  cmd->add_option("--spacing", o->options.spacing, "Resampling step (mm)")->capture_default_str();
  cmd->add_option("--neighbors", o->options.neighbors, "Candidate graph degree")->capture_default_str();
  cmd->add_option("--smoothing", o->options.smoothing_window, "Moving-average window")->capture_default_str();
  cmd->add_option("--seed", o->options.seed, "Perturbation seed")->capture_default_str();
  cmd->add_option("--out", o->out, "Output CSV")->required();
  cmd->callback([&action, o] {
    action = [o] {
      const auto mesh = load_surface_mesh(o->mesh);
      std::vector<Vec3> targets;
      for (const auto& t : o->targets)
        for (const auto& part : split(t, ';')) targets.push_back(parse_vec3(part));
      const auto cl = extract_centerline(mesh, parse_vec3(o->source), targets, o->options);
      save_centerline(o->out, cl);
      print_written(o->out);
      std::cout << cl.branches.size() << " branches, " << cl.point_count() << " points, " << cl.section_count()
                << " sections\n";
    };
  });
}

// ---- tangents --------------------------------------------------------------

void report_tangents(const TangentField& f, const std::string& out) {
  save_tangents(out, f);
  print_written(out);
  std::cout << tangent_method_name(f.method) << ": " << f.degenerate_count() << " flagged vertices\n";
}

void add_tangents(CLI::App& app, std::function<void()>& action) {
  auto* tg = app.add_subcommand("tangents", "Longitudinal tangent fields");
  tg->require_subcommand(1);
  {
    auto* cmd = tg->add_subcommand("auto", "Mesh-generated tangent basis");
    auto o = std::make_shared<std::tuple<std::string, std::string, std::string>>("", "t2", "");
    auto& [mesh, which, out] = *o;
    cmd->add_option("--mesh", mesh)->required();
    cmd->add_option("--which", which, "t1 or t2")->capture_default_str();
    cmd->add_option("--out", out)->required();
    cmd->callback([&action, o] {
      action = [o] {
        auto& [mesh, which, out] = *o;
        if (which != "t1" && which != "t2") fail(Errc::bad_argument, "--which must be t1 or t2");
        const auto basis = automatic_tangent_basis(load_surface_mesh(mesh));
        report_tangents(which == "t1" ? basis.first : basis.second, out);
      };
    });
  }
  {
    auto* cmd = tg->add_subcommand("flip", "Sign-correct t2 against per-region flow vectors");
    struct Opts {
      std::string mesh, centerline, out;
      std::vector<std::string> flow;
      double tolerance = kFlipSignTolerance;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--mesh", o->mesh)->required();
    cmd->add_option("--flow-vector", o->flow, "label:x,y,z (repeatable)");
    cmd->add_option("--centerline", o->centerline, "Centerline whose sections label the regions");
    cmd->add_option("--tolerance", o->tolerance)->capture_default_str();
    cmd->add_option("--out", o->out)->required();
    cmd->callback([&action, o] {
      action = [o] {
        const auto mesh = load_surface_mesh(o->mesh);
        PipelineConfig scratch;
        for (const auto& f : o->flow) apply_setting(scratch, "flow_vector", f);
        std::vector<int> labels(mesh.region_labels().begin(), mesh.region_labels().end());
        auto regions = scratch.flow_vectors;
        if (!o->centerline.empty()) {
          const auto cl = load_centerline(o->centerline);
          labels = project_centerline_tangents(mesh, cl).regions;
          if (regions.empty()) regions = section_flow_vectors(cl);
        }
        if (regions.empty()) fail(Errc::bad_argument, "pass --flow-vector or --centerline");
        const auto basis = automatic_tangent_basis(mesh);
        report_tangents(flip_tangents(basis.second, labels, regions, o->tolerance), o->out);
      };
    });
  }
  {
    auto* cmd = tg->add_subcommand("project", "Project centerline tangents onto the wall");
    struct Opts {
      std::string mesh, centerline, out;
      ProjectionOptions options;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--mesh", o->mesh)->required();
    cmd->add_option("--centerline", o->centerline)->required();
    cmd->add_option("--neighbors", o->options.neighbors, "Centerline points blended per vertex")->capture_default_str();
    cmd->add_option("--out", o->out)->required();
    cmd->callback([&action, o] {
      action = [o] {
        const auto mesh = load_surface_mesh(o->mesh);
        report_tangents(project_centerline_tangents(mesh, load_centerline(o->centerline), o->options), o->out);
      };
    });
  }
}

// ---- wss -------------------------------------------------------------------

void add_wss(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("wss", "Wall shear stress series from traction or stress");
  struct Opts {
    std::string series, mesh, tangents, out_dir, format = "csv";
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--series", o->series, "Traction or stress manifest")->required();
  cmd->add_option("--mesh", o->mesh, "Mesh (default: from the manifest)");
  cmd->add_option("--tangents", o->tangents, "Tangent CSV for the longitudinal and transversal parts");
  cmd->add_option("--format", o->format)->capture_default_str();
  cmd->add_option("--out-dir", o->out_dir)->required();
  cmd->callback([&action, o] {
    action = [o] {
      const auto in = load_series_input(o->series, o->mesh);
      const auto traction = as_traction(in);
      const auto normals = vertex_normals(in.mesh);
      const auto fmt = parse_format(o->format);
      const auto mesh_ref = mesh_reference(in.mesh_path, o->out_dir);
      fs::create_directories(o->out_dir);
      const auto vec = wss_vector(traction, normals);
      print_written(save_series(o->out_dir, "wss_vector", vec, mesh_ref, fmt));
      print_written(save_series(o->out_dir, "wss_amplitude", wss_amplitude(vec), mesh_ref, fmt));
      if (!o->tangents.empty()) {
        const auto t = load_tangents(o->tangents);
        print_written(save_series(o->out_dir, "wss_longitudinal", wss_longitudinal(traction, t), mesh_ref, fmt));
        print_written(
            save_series(o->out_dir, "wss_transversal", wss_transversal(traction, t, normals), mesh_ref, fmt));
      }
    };
  });
}

// ---- indicators ------------------------------------------------------------

void add_indicators(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("indicators", "Time-averaged wall shear indicators");
  struct Opts {
    std::string series, mesh, tangents, window, which = "osi,osil,tawss", out_dir;
    bool vtk = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--series", o->series, "Traction or stress manifest")->required();
  cmd->add_option("--mesh", o->mesh, "Mesh (default: from the manifest)");
  cmd->add_option("--tangents", o->tangents, "Tangent CSV (needed for osil and meanl)");
  cmd->add_option("--window", o->window, "t0:t1 (default: manifest window or full series)");
  cmd->add_option("--which", o->which, "Comma list of osi, osil, tawss, meanl")->capture_default_str();
  cmd->add_flag("--vtk", o->vtk, "Also write indicators.vtk");
  cmd->add_option("--out-dir", o->out_dir)->required();
  cmd->callback([&action, o] {
    action = [o] {
      auto in = load_series_input(o->series, o->mesh);
      std::optional<TimeWindow> window;
      if (!o->window.empty()) window = parse_window(o->window);
      std::vector<IndicatorKind> kinds;
      for (const auto& k : split(o->which, ',')) kinds.push_back(parse_indicator_kind(trim(k)));

      const auto traction = as_traction(in);
      const auto normals = vertex_normals(in.mesh);
      std::optional<WallFieldSeries> vec, lon;
      auto wss = [&]() -> const WallFieldSeries& {
        if (!vec) vec = wss_vector(traction, normals);
        return *vec;
      };
      auto wss_l = [&]() -> const WallFieldSeries& {
        if (!lon) {
          if (o->tangents.empty()) fail(Errc::bad_argument, "osil and meanl need --tangents");
          lon = wss_longitudinal(traction, load_tangents(o->tangents));
        }
        return *lon;
      };

      fs::create_directories(o->out_dir);
      std::vector<PointField> point_data;
      for (auto kind : kinds) {
        IndicatorField f;
        switch (kind) {
          case IndicatorKind::osi: f = osi_vector(wss(), window); break;
          case IndicatorKind::osi_longitudinal: f = osi_longitudinal(wss_l(), window); break;
          case IndicatorKind::tawss: f = tawss(wss(), window); break;
          case IndicatorKind::mean_wss_longitudinal: f = temporal_mean(wss_l(), window); break;
        }
        std::string stem(indicator_name(kind));
        for (auto& c : stem) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const auto path = fs::path(o->out_dir) / (stem + ".csv");
        save_indicator_csv(path, f);
        print_written(path);
        std::cout << indicator_name(kind) << ": window " << format_roundtrip(f.window.begin) << ':'
                  << format_roundtrip(f.window.end) << ", " << f.flagged_count() << " flagged vertices\n";
        point_data.push_back(scalar_field(std::string(indicator_name(kind)), f.values));
      }
      if (o->vtk) {
        const auto path = fs::path(o->out_dir) / "indicators.vtk";
        export_vtk(path, in.mesh, point_data);
        print_written(path);
      }
    };
  });
}

// ---- convergence -----------------------------------------------------------

void add_convergence(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("convergence", "Mesh convergence study or table ingestion");
  struct Opts {
    std::vector<std::string> meshes, fields, tau_fields;
    std::size_t reference = 0;
    std::string measure = "surface", table, csv;
  };
  auto o = std::make_shared<Opts>();
  auto* table = cmd->add_option("--table", o->table, "CSV with mesh,elements,h,err_u[,err_tau]");
  auto* meshes = cmd->add_option("--meshes", o->meshes, "Meshes, coarse to fine")->excludes(table);
  cmd->add_option("--fields", o->fields, "Per-vertex value CSV for each mesh")->needs(meshes);
  cmd->add_option("--tau-fields", o->tau_fields, "Second per-vertex field for each mesh")->needs(meshes);
  cmd->add_option("--reference", o->reference, "1-based index of the reference mesh (default: last)");
  cmd->add_option("--measure", o->measure, "surface or volume")->capture_default_str();
  cmd->add_option("--csv", o->csv, "Also write the report as CSV");
  cmd->callback([&action, o] {
    action = [o] {
      ConvergenceReport report;
      if (!o->table.empty()) {
        report = load_convergence_table(o->table);
      } else {
        if (o->meshes.size() < 2) fail(Errc::bad_argument, "pass --table or at least two --meshes");
        if (o->fields.size() != o->meshes.size())
          fail(Errc::bad_argument, "--fields must list one file per mesh");
        if (!o->tau_fields.empty() && o->tau_fields.size() != o->meshes.size())
          fail(Errc::bad_argument, "--tau-fields must list one file per mesh");
        const std::size_t ref = o->reference == 0 ? o->meshes.size() : o->reference;
        if (ref > o->meshes.size()) fail(Errc::bad_argument, "--reference out of range");
        std::vector<std::vector<double>> fields, taus;
        for (const auto& f : o->fields) fields.push_back(load_vertex_values(f));
        for (const auto& f : o->tau_fields) taus.push_back(load_vertex_values(f));
        if (o->measure == "surface") {
          std::vector<SurfaceMesh> ms;
          for (const auto& m : o->meshes) ms.push_back(load_surface_mesh(m));
          report = run_convergence_study(std::span<const SurfaceMesh>(ms), fields, ref - 1, taus);
        } else if (o->measure == "volume") {
          std::vector<TetMesh> ms;
          for (const auto& m : o->meshes) ms.push_back(load_tet_mesh(m));
          report = run_convergence_study(std::span<const TetMesh>(ms), fields, ref - 1, taus);
        } else {
          fail(Errc::bad_argument, "--measure must be surface or volume");
        }
      }
      write_report_text(std::cout, report);
      if (!o->csv.empty()) {
        std::ofstream out(o->csv, std::ios::binary);
        if (!out) fail(Errc::io, "cannot write " + o->csv);
        write_report_csv(out, report);
      }
    };
  });
}

// ---- export ----------------------------------------------------------------

void add_export(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("export", "Write a mesh and per-vertex fields as legacy VTK");
  struct Opts {
    std::string mesh, series, out;
    std::vector<std::string> scalars, tangents;
    std::size_t time_index = 0;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--mesh", o->mesh)->required();
  cmd->add_option("--scalar", o->scalars, "NAME=values.csv (repeatable)");
  cmd->add_option("--tangents", o->tangents, "NAME=tangents.csv (repeatable)");
  cmd->add_option("--series", o->series, "Series manifest; one time slice is exported");
  cmd->add_option("--time-index", o->time_index, "Slice of --series to export")->capture_default_str();
  cmd->add_option("--out", o->out, "Output .vtk file")->required();
  cmd->callback([&action, o] {
    action = [o] {
      const auto mesh = load_surface_mesh(o->mesh);
      auto named = [](const std::string& spec) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) fail(Errc::bad_argument, "expected NAME=file but got '" + spec + "'");
        return std::pair{spec.substr(0, eq), spec.substr(eq + 1)};
      };
      std::vector<PointField> fields;
      for (const auto& s : o->scalars) {
        const auto [name, file] = named(s);
        fields.push_back(scalar_field(name, load_vertex_values(file)));
      }
      for (const auto& s : o->tangents) {
        const auto [name, file] = named(s);
        fields.push_back(vector_field(name, load_tangents(file).vectors));
      }
      if (!o->series.empty()) {
        const auto s = load_series(o->series, static_cast<long long>(mesh.vertex_count())).series;
        if (o->time_index >= s.time_count()) fail(Errc::bad_argument, "--time-index out of range");
        const auto slice = s.slice(o->time_index);
        const std::string name = std::string(field_kind_name(s.kind()));
        if (s.kind() == FieldKind::stress_tensor) fail(Errc::kind_mismatch, "stress series cannot be exported to VTK");
        fields.push_back(PointField{name, component_count(s.kind()), {slice.begin(), slice.end()}});
      }
      export_vtk(o->out, mesh, fields);
      print_written(o->out);
    };
  });
}

// ---- run -------------------------------------------------------------------

void add_run(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("run", "Run the configured pipeline end to end");
  struct Opts {
    std::string config;
    std::string mesh, series, centerline, window, tangents, indicators, output;
    std::vector<std::string> flow, sets;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--config", o->config, "key = value config file");
  cmd->add_option("--mesh", o->mesh);
  cmd->add_option("--series", o->series);
  cmd->add_option("--centerline", o->centerline);
  cmd->add_option("--window", o->window, "t0:t1");
  cmd->add_option("--tangents", o->tangents, "projected or flipped");
  cmd->add_option("--indicators", o->indicators, "Comma list of osi, osil, tawss, meanl");
  cmd->add_option("--output", o->output, "Output directory");
  cmd->add_option("--flow-vector", o->flow, "label:x,y,z (repeatable; replaces config entries)");
  cmd->add_option("--set", o->sets, "key=value override (repeatable)");
  cmd->callback([&action, o] {
    action = [o] {
      PipelineConfig config;
      if (!o->config.empty()) config = load_pipeline_config(o->config);
      // Flags win over the config file.
      const std::pair<const char*, const std::string*> direct[] = {
          {"mesh", &o->mesh},         {"series", &o->series},         {"centerline", &o->centerline},
          {"window", &o->window},     {"tangents", &o->tangents},     {"indicators", &o->indicators},
          {"output", &o->output}};
      for (const auto& [key, value] : direct)
        if (!value->empty()) apply_setting(config, key, *value);
      if (!o->flow.empty()) {
        config.flow_vectors.clear();
        for (const auto& f : o->flow) apply_setting(config, "flow_vector", f);
      }
      for (const auto& s : o->sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(Errc::config, "--set expects key=value");
        apply_setting(config, trim(std::string_view(s).substr(0, eq)), std::string_view(s).substr(eq + 1));
      }
      const auto result = run_pipeline(config);
      for (const auto& f : result.files) print_written(f);
      for (const auto& s : result.flags) std::cout << "flagged[" << s.stage << "] = " << s.flagged << '\n';
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wall shear stress toolkit"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  std::function<void()> action;
  add_synth(app, action);
  add_centerline(app, action);
  add_tangents(app, action);
  add_wss(app, action);
  add_indicators(app, action);
  add_convergence(app, action);
  add_export(app, action);
  add_run(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    action();
  } catch (const PipelineError& e) {
    std::cerr << "error [" << errc_name(e.code()) << "] " << e.what() << '\n';
    return e.is_usage_error() ? kExitUsage : kExitData;
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "] " << e.what() << '\n';
    return e.is_usage_error() ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
