#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "wsskit/indicators.hpp"
#include "wsskit/pipeline.hpp"
#include "wsskit/tangent_fields.hpp"
#include "wsskit/vtk.hpp"

using namespace wsskit;
using namespace wsskit::test;

TEST_SUITE("cli_io") {
  TEST_CASE("VTK round trip") {
    const auto mesh = make_cylinder_mesh(3.0, 10.0, 12, 6);
    std::vector<double> osi(mesh.vertex_count()), tawss_v(mesh.vertex_count());
    std::vector<Vec3> t(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      osi[v] = 0.5 * std::sin(double(v));
      tawss_v[v] = 1.0 + 1e-3 * double(v);
      t[v] = {std::cos(double(v)), std::sin(double(v)), 0.0};
    }
    const std::vector<PointField> fields{scalar_field("OSI", osi), scalar_field("TAWSS", tawss_v), vector_field("t_l", t)};
    std::stringstream ss;
    write_vtk(ss, mesh, fields);
    const auto back = read_vtk(ss);
    REQUIRE(back.points.size() == mesh.vertex_count());
    REQUIRE(back.triangles.size() == mesh.triangle_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) CHECK(distance(back.points[v], mesh.vertices()[v]) < 1e-9 * 10.0);
    for (std::size_t f = 0; f < mesh.triangle_count(); ++f) CHECK(back.triangles[f] == mesh.triangles()[f]);
    REQUIRE(back.fields.size() == 3);
    CHECK(back.fields[0].name == "OSI");
    CHECK(back.fields[1].name == "TAWSS");
    CHECK(back.fields[2].name == "t_l");
    CHECK(back.fields[2].components == 3);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < fields[k].data.size(); ++i)
        CHECK(std::abs(back.fields[k].data[i] - fields[k].data[i]) <= 1e-9 * std::max(1.0, std::abs(fields[k].data[i])));
  }

  TEST_CASE("VTK without fields has no point data") {
    const auto mesh = make_cylinder_mesh(1.0, 2.0, 8, 3);
    std::stringstream ss;
    write_vtk(ss, mesh, {});
    CHECK(ss.str().find("POINT_DATA") == std::string::npos);
    const auto back = read_vtk(ss);
    CHECK(back.fields.empty());
    CHECK(back.points.size() == mesh.vertex_count());
  }

  TEST_CASE("VTK field checks") {
    const auto mesh = make_cylinder_mesh(1.0, 2.0, 8, 3);
    std::vector<double> short_field(mesh.vertex_count() - 1, 0.0);
    const std::vector<PointField> bad{scalar_field("x", short_field)};
    std::ostringstream out;
    CHECK(error_code([&] { write_vtk(out, mesh, bad); }) == Errc::length_mismatch);
    std::vector<double> ok(mesh.vertex_count(), 0.0);
    const std::vector<PointField> spaced{scalar_field("a b", ok)};
    CHECK(error_code([&] { write_vtk(out, mesh, spaced); }) == Errc::bad_argument);
    std::istringstream garbage("not a vtk file\n");
    CHECK(error_code([&] { read_vtk(garbage); }) == Errc::parse);
  }

  TEST_CASE("config parsing") {
    std::istringstream in(R"(# sample
mesh = wall.off
series = traction.manifest
centerline = cl.csv
window = 0.9:1.8
tangents = flipped
flow_vector = 0:0,0,1
flow_vector = 1:1,0,0
indicators = osil,tawss
output = results
projection_neighbors = 3
quadrature = trapezoid
)");
    const auto c = read_pipeline_config(in, "/data");
    CHECK(c.mesh == std::filesystem::path("/data/wall.off"));
    CHECK(c.series == std::filesystem::path("/data/traction.manifest"));
    CHECK(c.output == std::filesystem::path("/data/results"));
    REQUIRE(c.window);
    CHECK(c.window->begin == 0.9);
    CHECK(c.window->end == 1.8);
    CHECK(c.tangents == TangentMethod::flipped);
    REQUIRE(c.flow_vectors.size() == 2);
    CHECK(c.flow_vectors[1].label == 1);
    CHECK(c.flow_vectors[1].v.x == 1.0);
    REQUIRE(c.indicators.size() == 2);
    CHECK(c.indicators[0] == IndicatorKind::osi_longitudinal);
    CHECK(c.projection_neighbors == 3);
  }

  TEST_CASE("config errors") {
    for (const char* text : {"colour = red\n", "window = 2:1\n", "tangents = sideways\n", "quadrature = simpson\n",
                             "indicators = wss\n", "no equals sign\n", "flow_vector = 0:1,2\n"}) {
      std::istringstream in(text);
      CHECK(error_code([&] { read_pipeline_config(in); }) == Errc::config);
    }
    CHECK(error_code([] { load_pipeline_config("/nonexistent/wsskit.cfg"); }) == Errc::config);
  }

  TEST_CASE("later settings override earlier ones") {
    std::istringstream in("window = 0:1\ntangents = flipped\n");
    auto c = read_pipeline_config(in);
    apply_setting(c, "window", "0.2:0.4");
    apply_setting(c, "tangents", "projected");
    CHECK(c.window->begin == 0.2);
    CHECK(c.tangents == TangentMethod::projected);
  }

  TEST_CASE("config hash ignores the output directory") {
    PipelineConfig a, b;
    a.series = b.series = "s.manifest";
    b.output = "elsewhere";
    CHECK(fnv1a(canonical_config(a)) == fnv1a(canonical_config(b)));
    b.window = TimeWindow{0.0, 1.0};
    CHECK(fnv1a(canonical_config(a)) != fnv1a(canonical_config(b)));
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  }

  TEST_CASE("pipeline on Poiseuille flow") {
    TempDir dir("pipeline_poiseuille");
    const auto config = poiseuille_inputs(dir.path());
    const auto result = run_pipeline(config);
    CHECK(result.files.size() == 7);
    const auto osil = load_vertex_values(config.output / "osi_l.csv");
    const auto ta = load_vertex_values(config.output / "tawss.csv");
    const auto meanl = load_vertex_values(config.output / "mean_wss_l.csv");
    const double tau = poiseuille_wall_shear(7.9, 0.00345, 3.0);
    for (std::size_t v = 0; v < osil.size(); ++v) {
      CHECK(osil[v] == 0.0);
      CHECK(std::abs(ta[v] - tau) < 1e-9);
      CHECK(std::abs(meanl[v] - tau) < 1e-9);
    }
    for (const auto& f : result.flags) CHECK(f.flagged == 0);
    const auto vtk = load_vtk(config.output / "wall.vtk");
    CHECK(vtk.fields.size() == 5);
    const auto log = read_file(config.output / "run.log");
    CHECK(log.find("config_hash") != std::string::npos);
    CHECK(log.find(std::string(version())) != std::string::npos);
  }

  TEST_CASE("pipeline output is byte-identical across runs") {
    TempDir dir("pipeline_repeat");
    auto config = poiseuille_inputs(dir.path());
    run_pipeline(config);
    const auto first = config.output;
    config.output = dir / "again";
    run_pipeline(config);
    for (const char* name : {"tangents.csv", "osi.csv", "osi_l.csv", "tawss.csv", "mean_wss_l.csv", "wall.vtk", "run.log"})
      CHECK_MESSAGE(read_file(first / name) == read_file(config.output / name), name);
  }

  TEST_CASE("pipeline failures name the stage") {
    TempDir dir("pipeline_errors");
    auto config = poiseuille_inputs(dir.path());
    config.series = dir / "missing.manifest";
    try {
      run_pipeline(config);
      FAIL("expected a PipelineError");
    } catch (const PipelineError& e) {
      CHECK(e.stage() == "series");
      CHECK(e.code() == Errc::config);
      CHECK(std::string(e.what()).find("stage 'series'") != std::string::npos);
    }
    config = poiseuille_inputs(dir.path());
    config.centerline.clear();
    try {
      run_pipeline(config);
      FAIL("expected a PipelineError");
    } catch (const PipelineError& e) {
      CHECK(e.stage() == "config");
    }
    config = poiseuille_inputs(dir.path());
    config.window = TimeWindow{0.5, 5.0};
    try {
      run_pipeline(config);
      FAIL("expected a PipelineError");
    } catch (const PipelineError& e) {
      CHECK(e.code() == Errc::window_out_of_range);
    }
  }

  TEST_CASE("indicator CSV layout") {
    IndicatorField f;
    f.values = {0.25, 0.0, std::nan("")};
    f.flags = {kUnflagged, kNoShear, kMasked};
    f.indicator = IndicatorKind::osi_longitudinal;
    std::ostringstream out;
    write_indicator_csv(out, f);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "vertex_id,value,flagged");
  }
}
