#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wsskit/error.hpp"
#include "wsskit/mesh.hpp"
#include "wsskit/mesh_io.hpp"
#include "wsskit/synthetic.hpp"

using namespace wsskit;
using namespace wsskit::test;

namespace {

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(dot(normalized(a), normalized(b)), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace

TEST_SUITE("mesh_core") {
  TEST_CASE("unit cube OFF: counts and outward normals") {
    const auto mesh = load_surface_mesh(data_dir() / "unit_cube.off");
    CHECK(mesh.vertex_count() == 8);
    CHECK(mesh.triangle_count() == 12);
    CHECK(mesh.closed());
    const Vec3 c{0.5, 0.5, 0.5};
    // Area-weighted oracle from outward face normals (axis-aligned faces).
    std::vector<Vec3> expect(8);
    for (const auto& t : mesh.triangles()) {
      const Vec3 centroid = (mesh.vertices()[t[0]] + mesh.vertices()[t[1]] + mesh.vertices()[t[2]]) / 3.0;
      Vec3 n;
      for (std::size_t k = 0; k < 3; ++k)
        if (std::abs(centroid[k] - 0.5) > 0.4) n[k] = centroid[k] > 0.5 ? 0.5 : -0.5;
      for (auto v : t) expect[v] += n;
    }
    for (std::size_t v = 0; v < 8; ++v) {
      CHECK(dot(mesh.normals()[v], mesh.vertices()[v] - c) > 0.0);
      CHECK(norm(mesh.normals()[v]) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(angle_deg(mesh.normals()[v], expect[v]) < 1e-6);
    }
  }

  TEST_CASE("OBJ reader ignores normals and texture coordinates") {
    const auto obj = load_surface_mesh(data_dir() / "unit_cube.obj");
    const auto off = load_surface_mesh(data_dir() / "unit_cube.off");
    REQUIRE(obj.vertex_count() == off.vertex_count());
    for (std::size_t v = 0; v < 8; ++v) CHECK(obj.normals()[v] == off.normals()[v]);
  }

  TEST_CASE("inward-wound closed mesh is reoriented outward") {
    std::stringstream in;
    in << "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 1 2 3\n3 0 2 3\n";
    const auto mesh = read_off(in);
    Vec3 c{0.25, 0.25, 0.25};
    for (std::size_t v = 0; v < 4; ++v) CHECK(dot(mesh.normals()[v], mesh.vertices()[v] - c) > 0.0);
  }

  TEST_CASE("cylinder round-trips through OFF bit-identically") {
    const auto mesh = make_cylinder_mesh(3.0, 40.0, 16, 9, CapStyle::flat);
    std::stringstream buf;
    write_off(buf, mesh);
    const auto back = read_off(buf);
    REQUIRE(back.vertex_count() == mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) CHECK(back.vertices()[v] == mesh.vertices()[v]);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) CHECK(back.triangles()[t] == mesh.triangles()[t]);
  }

  TEST_CASE("out-of-range face index is a parse error") {
    std::stringstream in;
    in << "OFF\n100 1 0\n";
    for (int i = 0; i < 100; ++i) in << i << " " << (i % 7) << " " << (i % 3) << "\n";
    in << "3 0 1 999\n";
    CHECK(error_code([&] { read_off(in); }) == Errc::parse);
  }

  TEST_CASE("malformed input") {
    std::stringstream a("OFX\n3 1 0\n");
    CHECK(error_code([&] { read_off(a); }) == Errc::parse);
    std::stringstream b("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n");
    CHECK(error_code([&] { read_off(b); }) == Errc::parse);
    std::stringstream c("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 3 4\n");
    CHECK(error_code([&] { read_obj(c); }) == Errc::parse);
    CHECK(error_code([] { load_surface_mesh(data_dir() / "missing.off"); }) == Errc::io);
  }

  TEST_CASE("non-manifold edge is a topology error") {
    std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
    std::vector<Triangle> t{{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
    CHECK(error_code([&] { SurfaceMesh(v, t); }) == Errc::topology);
  }

  TEST_CASE("degenerate triangle is rejected") {
    std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK(error_code([&] { SurfaceMesh(v, {{0, 1, 2}}); }) == Errc::topology);
  }

  TEST_CASE("flat patch normals are +z") {
    const auto mesh = flat_patch(6);
    for (const auto& n : mesh.normals()) CHECK(norm(n - Vec3{0, 0, 1}) < 1e-12);
  }

  TEST_CASE("sphere normals follow the radius") {
    const auto mesh = make_sphere_mesh(1.0, 4);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
      CHECK(angle_deg(mesh.normals()[v], mesh.vertices()[v]) < 1.0);
  }

  TEST_CASE("cylinder construction") {
    const double R = 3.0, L = 40.0;
    const auto mesh = make_cylinder_mesh(R, L, 64, 128, CapStyle::none);
    const auto n_lat = cylinder_lateral_count(64, 128);
    for (std::size_t v = 0; v < n_lat; ++v) {
      const auto& p = mesh.vertices()[v];
      CHECK(std::abs(std::hypot(p.x, p.y) - R) < 1e-9);
      CHECK(angle_deg(mesh.normals()[v], {p.x, p.y, 0.0}) < 1.0);
    }
    // Vertex (R, 0, z) is in the first angular column.
    CHECK(angle_deg(mesh.normals()[5], {1, 0, 0}) < 1.0);
    const double exact = 2.0 * std::numbers::pi * R * L;
    CHECK(std::abs(surface_area(mesh) - exact) / exact < 0.005);
    CHECK(error_code([] { make_cylinder_mesh(3, 40, 7, 10); }) == Errc::bad_resolution);
    CHECK(error_code([] { make_cylinder_mesh(3, 40, 8, 1); }) == Errc::bad_resolution);
  }

  TEST_CASE("capped cylinders are closed with outward normals") {
    for (auto caps : {CapStyle::flat, CapStyle::dome}) {
      const auto mesh = make_cylinder_mesh(3.0, 10.0, 16, 6, caps);
      CHECK(mesh.closed());
      CHECK(mesh.reoriented_triangles() == 0);
      const Vec3 c{0, 0, 5};
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        CHECK(dot(mesh.normals()[v], mesh.vertices()[v] - c) > 0.0);
    }
  }

  TEST_CASE("regular tetrahedron mesh size") {
    const auto tet = make_regular_tetrahedron(1.0);
    CHECK(mean_mesh_size(tet) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(mean_mesh_size(tet.scaled(2.0)) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(error_code([] { mean_mesh_size(TetMesh()); }) == Errc::empty_mesh);
  }

  TEST_CASE("mesh size is linear under scaling") {
    const auto box = make_box_tet_mesh(1.0, 3);
    for (double s : {0.5, 2.0, 7.25})
      CHECK(mean_mesh_size(box.scaled(s)) == doctest::Approx(s * mean_mesh_size(box)).epsilon(1e-12));
    double volume = 0.0;
    for (double w : lumped_vertex_volumes(box)) volume += w;
    CHECK(volume == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("tet mesh I/O round trip and orientation fix") {
    std::stringstream in("TET\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 2 1 3\n");
    const auto mesh = read_tet(in);
    CHECK(tet_volume(mesh, 0) > 0.0);
    std::stringstream out;
    write_tet(out, mesh);
    const auto back = read_tet(out);
    CHECK(back.tets()[0] == mesh.tets()[0]);
  }

  TEST_CASE("normals rotate with the mesh") {
    std::mt19937_64 rng(7);
    const auto mesh = make_sphere_mesh(2.0, 2);
    for (int trial = 0; trial < 5; ++trial) {
      const auto R = rotation_matrix(random_unit(rng), 0.3 + trial);
      const auto moved = mesh.transformed(R, random_vec(rng, 10.0));
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v) CHECK(norm(moved.normals()[v] - R * mesh.normals()[v]) < 1e-9);
    }
  }

  TEST_CASE("convex closed meshes have outward normals") {
    for (const auto& mesh : {make_sphere_mesh(1.0, 1), make_cylinder_mesh(1.0, 3.0, 12, 4, CapStyle::flat)}) {
      Vec3 c;
      for (const auto& p : mesh.vertices()) c += p;
      c = c / double(mesh.vertex_count());
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        CHECK(dot(mesh.normals()[v], mesh.vertices()[v] - c) > 0.0);
    }
  }

  TEST_CASE("surface mesh size is the mean incircle diameter") {
    // Right isosceles triangles with legs 1/n: incircle diameter (2 - sqrt 2)/n.
    const auto mesh = flat_patch(4);
    CHECK(mean_mesh_size(mesh) == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-12));
  }
}
