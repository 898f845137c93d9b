#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wsskit/indicators.hpp"
#include "wsskit/spatial.hpp"
#include "wsskit/synthetic.hpp"
#include "wsskit/tangent_fields.hpp"
#include "wsskit/wss.hpp"

using namespace wsskit;
using namespace wsskit::test;

namespace {

// 4 mu Q / (pi R^3) evaluated in SI units.
double poiseuille_si(double q_ml_s, double mu, double r_mm) {
  const double q = q_ml_s * 1e-6;
  const double r = r_mm * 1e-3;
  return 4.0 * mu * q / (std::numbers::pi * r * r * r);
}

TangentField axial_tangents(const SurfaceMesh& mesh) {
  return project_centerline_tangents(mesh, make_centerline({{{0, 0, -1}, {0, 0, 100}}}, {{1, 1}}));
}

}  // namespace

TEST_SUITE("synthetic_flows") {
  TEST_CASE("Poiseuille wall shear") {
    CHECK(poiseuille_wall_shear(7.9, 0.00345, 3.0) == doctest::Approx(poiseuille_si(7.9, 0.00345, 3.0)).epsilon(1e-14));
    CHECK(std::abs(poiseuille_wall_shear(7.9, 0.00345, 3.0) - 1.285) < 0.001);
    CHECK(poiseuille_wall_shear(0.0, 0.00345, 3.0) == 0.0);
    CHECK(poiseuille_wall_shear(7.9, 0.00345, 6.0) ==
          doctest::Approx(poiseuille_wall_shear(7.9, 0.00345, 3.0) / 8.0).epsilon(1e-14));
  }

  TEST_CASE("Poiseuille traction points downstream on the wall") {
    PoiseuilleParams p;
    const auto mesh = make_cylinder_mesh(p.R, 20.0, 32, 20);
    const auto tr = poiseuille_traction(mesh, p, {0.0, 1.0});
    const auto w = wss_vector(tr, mesh.normals());
    const double tau = poiseuille_si(p.Q, p.mu, p.R);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      CHECK(w.vector(0, v).z == doctest::Approx(tau).epsilon(1e-12));
      CHECK(dot(tr.vector(1, v), mesh.normals()[v]) == doctest::Approx(p.pressure).epsilon(1e-12));
    }
    p.Q = 0.0;
    const auto still = wss_vector(poiseuille_traction(mesh, p, {0.0}), mesh.normals());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) CHECK(norm(still.vector(0, v)) < 1e-12);
  }

  TEST_CASE("Poiseuille stress reproduces the traction") {
    PoiseuilleParams p;
    const auto mesh = make_cylinder_mesh(p.R, 20.0, 32, 20);
    const auto b = traction_from_stress(poiseuille_stress(mesh, p, {0.0}), mesh.normals());
    const double tau = poiseuille_si(p.Q, p.mu, p.R);
    const Vec3 a{0, 0, 1};
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      // -T n = p n + tau (a (r.n) + r (a.n)); boundary-row normals are not exactly radial.
      const auto& x = mesh.vertices()[v];
      const Vec3 r = normalized(Vec3{x.x, x.y, 0.0});
      const Vec3 n = mesh.normals()[v];
      const Vec3 expect = p.pressure * n + tau * (dot(r, n) * a + dot(a, n) * r);
      CHECK(norm(b.vector(0, v) - expect) < 1e-12);
    }
    // Away from the open ends n = r and the stress gives the wall traction.
    const auto direct = poiseuille_traction(mesh, p, {0.0});
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      const std::size_t k = v % 20;
      if (k == 0 || k == 19) continue;
      CHECK(norm(direct.vector(0, v) - b.vector(0, v)) < 1e-9);
    }
  }

  TEST_CASE("Poiseuille rejects a mesh of the wrong radius") {
    PoiseuilleParams p;
    p.R = 3.1;
    const auto mesh = make_cylinder_mesh(3.0, 20.0, 16, 5);
    CHECK(error_code([&] { poiseuille_traction(mesh, p, {0.0}); }) == Errc::geometry_mismatch);
  }

  TEST_CASE("pulsatile scaling") {
    PoiseuilleParams p;
    const auto mesh = make_cylinder_mesh(p.R, 20.0, 16, 8);
    const auto times = uniform_times(0.0, 1.0, 21);
    const auto steady = poiseuille_traction(mesh, p, times);
    const Waveform flat{{0.0, p.Q}, {1.0, p.Q}};
    const auto same = pulsatile_scale(steady, mesh.normals(), flat, p.Q);
    for (std::size_t t = 0; t < times.size(); ++t)
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v) CHECK(norm(same.vector(t, v) - steady.vector(t, v)) < 1e-12);
    const Waveform short_wave{{0.0, 1.0}, {0.5, 1.0}};
    CHECK(error_code([&] { pulsatile_scale(steady, mesh.normals(), short_wave, p.Q); }) == Errc::window_out_of_range);
  }

  TEST_CASE("square waves give exact OSI_L targets") {
    PoiseuilleParams p;
    const auto balanced = square_wave_case(p, 20.0, 16, 8, 1.0, -1.0, 0.0, 1.0, 41);
    const auto skewed = square_wave_case(p, 20.0, 16, 8, 2.0, -1.0, 0.0, 1.0, 41);
    const auto t = axial_tangents(balanced.mesh);
    for (const auto* c : {&balanced, &skewed}) {
      const auto wl = wss_longitudinal(c->traction, t);
      const auto osil = osi_longitudinal(wl);
      const auto osi = osi_vector(wss_vector(c->traction, c->mesh.normals()));
      for (std::size_t v = 0; v < c->mesh.vertex_count(); ++v) {
        CHECK(std::abs(osil.values[v] - c->osi_longitudinal[v]) < 1e-12);
        CHECK(std::abs(osi.values[v] - c->osi[v]) < 1e-12);
      }
    }
    CHECK(std::abs(balanced.osi_longitudinal[0] - 0.5) < 1e-15);
    CHECK(std::abs(balanced.osi[0] - 0.5) < 1e-15);
    CHECK(std::abs(skewed.osi_longitudinal[0] - 1.0 / 3.0) < 1e-15);
  }

  TEST_CASE("steady Poiseuille case: indicators match the oracle") {
    PoiseuilleParams p;
    const auto c = poiseuille_case(p, 40.0, 32, 40, uniform_times(0.0, 0.9, 10));
    CHECK(c.wss_amplitude.size() == c.mesh.vertex_count());
    const auto wss = wss_vector(c.traction, c.mesh.normals());
    const auto osi = osi_vector(wss);
    const auto osil = osi_longitudinal(wss_longitudinal(c.traction, axial_tangents(c.mesh)));
    const auto ta = tawss(wss);
    CHECK(osi.flagged_count() == 0);
    CHECK(osil.flagged_count() == 0);
    for (std::size_t v = 0; v < c.mesh.vertex_count(); ++v) {
      CHECK(osi.values[v] == 0.0);
      CHECK(osil.values[v] == 0.0);
      CHECK(std::abs(ta.values[v] - c.wss_amplitude[v]) < c.tolerance);
    }
  }

  TEST_CASE("Y-junction geometry") {
    const auto& mesh = y_mesh();
    CHECK(mesh.closed());
    // Mirror symmetry x -> -x swaps the branches.
    const KdTree tree(mesh.vertices());
    for (const auto& v : mesh.vertices()) CHECK(tree.nearest({-v.x, v.y, v.z}).squared_distance < 1e-12);
    for (const auto& v : mesh.vertices()) CHECK(tree.nearest({v.x, -v.y, v.z}).squared_distance < 1e-12);
  }

  TEST_CASE("Y-junction parameter checks") {
    YJunctionParams p;
    p.angle_deg = 5.0;
    CHECK(error_code([&] { make_y_junction_mesh(p); }) == Errc::bad_argument);
    p.angle_deg = 130.0;
    CHECK(error_code([&] { make_y_junction_mesh(p); }) == Errc::bad_argument);
    p = YJunctionParams{};
    p.angle_deg = 10.0;
    CHECK(error_code([&] { make_y_junction_mesh(p); }) == Errc::self_intersection);
    p = YJunctionParams{};
    p.cell = 1.5;
    CHECK(error_code([&] { make_y_junction_mesh(p); }) == Errc::bad_resolution);
  }

  TEST_CASE("projected tangents on the Y-junction are regular away from the blend") {
    const auto& mesh = y_mesh();
    const auto t = project_centerline_tangents(mesh, y_centerline());
    const auto& p = y_params();
    const double blend_radius = p.trunk_R + p.blend + 1.0;
    std::size_t checked = 0;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      if (norm(mesh.vertices()[v]) < blend_radius) continue;
      ++checked;
      CHECK(t.degenerate[v] == 0);
    }
    CHECK(checked > mesh.vertex_count() / 2);
  }
}
