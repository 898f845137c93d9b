#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wsskit/centerline.hpp"
#include "wsskit/error.hpp"
#include "wsskit/spatial.hpp"
#include "wsskit/synthetic.hpp"

using namespace wsskit;
using namespace wsskit::test;

TEST_SUITE("centerline") {
  TEST_CASE("straight cylinder follows the axis") {
    const auto& cl = cylinder_centerline();
    REQUIRE(cl.branches.size() == 1);
    const auto& br = cl.branches[0];
    CHECK(br.points.size() > 60);
    for (std::size_t k = 0; k < br.points.size(); ++k) {
      CHECK(std::hypot(br.points[k].x, br.points[k].y) < 0.06);
      CHECK(std::abs(br.radii[k] - 3.0) < 0.06);
    }
    CHECK(br.tangents[br.points.size() / 2].z > 0.9999);
  }

  TEST_CASE("centerline invariants") {
    for (const Centerline* cl : {&cylinder_centerline(), &y_centerline()}) {
      for (const auto& br : cl->branches) {
        double arc = 0.0;
        for (std::size_t k = 0; k < br.points.size(); ++k) {
          CHECK(br.radii[k] > 0.0);
          CHECK(std::abs(norm(br.tangents[k]) - 1.0) < 1e-9);
          if (k > 0) {
            const double step = distance(br.points[k], br.points[k - 1]);
            CHECK(step > 1e-6);
            arc += step;
            CHECK(dot(br.tangents[k], br.tangents[k - 1]) > 0.0);
          }
        }
        CHECK(arc > 0.0);
      }
    }
  }

  TEST_CASE("inscribed spheres are nearly empty") {
    const auto& mesh = capped_cylinder();
    const KdTree tree(mesh.vertices());
    for (const auto& br : cylinder_centerline().branches)
      for (std::size_t k = 0; k < br.points.size(); ++k)
        CHECK(std::sqrt(tree.nearest(br.points[k]).squared_distance) >= 0.95 * br.radii[k]);
  }

  TEST_CASE("torus segment follows the ring arc") {
    const double rc = 10.0, r = 2.0;
    const auto mesh = torus(rc, r, 96, 24);
    const Vec3 source{rc, 0, 0};
    const Vec3 target{0, rc, 0};
    CenterlineOptions opt;
    opt.spacing = 0.5;
    const auto cl = extract_centerline(mesh, source, std::span(&target, 1), opt);
    REQUIRE(cl.branches.size() == 1);
    const auto& br = cl.branches[0];
    for (std::size_t k = 0; k < br.points.size(); ++k) {
      const auto& p = br.points[k];
      CHECK(std::abs(std::hypot(p.x, p.y) - rc) < 0.02 * rc);
      CHECK(std::abs(p.z) < 0.02 * rc);
      CHECK(p.x > -0.5);
      CHECK(p.y > -0.5);
      CHECK(std::abs(br.radii[k] - r) < 0.1 * r);
    }
  }

  TEST_CASE("Y-junction yields two branches sharing a trunk") {
    const auto& cl = y_centerline();
    REQUIRE(cl.branches.size() == 2);
    const auto& a = cl.branches[0];
    const auto& b = cl.branches[1];
    CHECK(b.parent == 0);
    REQUIRE(b.shared_prefix >= 2);
    for (std::size_t k = 0; k < b.shared_prefix; ++k) {
      CHECK(a.points[k] == b.points[k]);
      CHECK(a.radii[k] == b.radii[k]);
    }
    CHECK(a.points.back().x > 0.0);
    CHECK(b.points.back().x < 0.0);
    CHECK(cl.section_count() == 3);
    CHECK(cl.sections[0][0] == 0);
    CHECK(cl.sections[0].back() != cl.sections[1].back());
  }

  TEST_CASE("rigid motion moves the centerline with the mesh") {
    const auto mesh = make_cylinder_mesh(2.0, 12.0, 24, 16, CapStyle::dome);
    const Vec3 target{0, 0, 12};
    CenterlineOptions opt;
    opt.spacing = 0.5;
    const auto base = extract_centerline(mesh, {0, 0, 0}, std::span(&target, 1), opt);
    const auto R = rotation_matrix(Vec3{1, 2, 3}, 0.7);
    const Vec3 shift{5, -3, 2};
    const auto moved_target = R * target + shift;
    const auto moved = extract_centerline(mesh.transformed(R, shift), shift, std::span(&moved_target, 1), opt);
    REQUIRE(moved.branches[0].points.size() == base.branches[0].points.size());
    for (std::size_t k = 0; k < base.branches[0].points.size(); ++k)
      CHECK(distance(moved.branches[0].points[k], R * base.branches[0].points[k] + shift) < 1e-6);
  }

  TEST_CASE("extraction errors") {
    const auto& mesh = capped_cylinder();
    const Vec3 outside{10, 0, 20};
    const Vec3 inside{0, 0, 20};
    CHECK(error_code([&] { extract_centerline(mesh, outside, std::span(&inside, 1)); }) == Errc::point_outside_lumen);
    CHECK(error_code([&] { extract_centerline(mesh, inside, std::span(&outside, 1)); }) == Errc::point_outside_lumen);
    CHECK(error_code([&] { extract_centerline(mesh, inside, {}); }) == Errc::bad_argument);
    CenterlineOptions bad;
    bad.spacing = 0.0;
    CHECK(error_code([&] { extract_centerline(mesh, inside, std::span(&inside, 1), bad); }) == Errc::bad_argument);
  }

  TEST_CASE("tangents of simple curves") {
    std::vector<Vec3> line;
    for (int k = 0; k < 10; ++k) line.push_back({0, 0, 0.3 * k});
    for (const auto& t : centerline_tangents(line)) CHECK(t == Vec3{0, 0, 1});

    std::vector<Vec3> arc;
    for (int k = 0; k <= 40; ++k) {
      const double a = 0.5 * std::numbers::pi * k / 40.0;
      arc.push_back({5 * std::cos(a), 5 * std::sin(a), 0});
    }
    const auto ta = centerline_tangents(arc);
    // Central differences are exact on a circle; one-sided ends lag by half a step.
    for (std::size_t k = 0; k < arc.size(); ++k) {
      const double c = std::abs(dot(ta[k], normalized(arc[k])));
      const double off = std::asin(std::min(1.0, c)) * 180.0 / std::numbers::pi;
      const bool end = k == 0 || k + 1 == arc.size();
      CHECK(off < (end ? 0.5 * 90.0 / 40.0 + 1e-9 : 1e-9));
    }

    const std::vector<Vec3> two{{1, 1, 1}, {2, 3, 1}};
    const auto t2 = centerline_tangents(two);
    CHECK(norm(t2[0] - normalized(two[1] - two[0])) < 1e-15);
    CHECK(t2[1] == t2[0]);

    const std::vector<Vec3> one{{0, 0, 0}};
    CHECK(error_code([&] { centerline_tangents(one); }) == Errc::too_few_points);
  }

  TEST_CASE("CSV round trip preserves points, radii and topology") {
    const auto& cl = y_centerline();
    std::stringstream buf;
    write_centerline_csv(buf, cl);
    CHECK(buf.str().rfind("branch_id,point_index,x,y,z,radius,tx,ty,tz\n", 0) == 0);
    const auto back = read_centerline_csv(buf);
    REQUIRE(back.branches.size() == cl.branches.size());
    for (std::size_t b = 0; b < cl.branches.size(); ++b) {
      CHECK(back.branches[b].points == cl.branches[b].points);
      CHECK(back.branches[b].radii == cl.branches[b].radii);
      REQUIRE(back.branches[b].tangents.size() == cl.branches[b].tangents.size());
      for (std::size_t k = 0; k < cl.branches[b].tangents.size(); ++k)
        CHECK(norm(back.branches[b].tangents[k] - cl.branches[b].tangents[k]) < 1e-15);
      CHECK(back.branches[b].parent == cl.branches[b].parent);
      CHECK(back.sections[b] == cl.sections[b]);
    }
  }

  TEST_CASE("locator finds the nearest centerline point") {
    const auto cl = make_centerline({{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}}}, {{1, 1, 1}});
    const CenterlineLocator loc(cl);
    const auto hit = loc.nearest({3, 0, 1.2});
    CHECK(hit.point == 1);
    CHECK(hit.distance == doctest::Approx(std::hypot(3.0, 0.2)));
    CHECK(loc.tangent(hit) == Vec3{0, 0, 1});
    CHECK(loc.section(hit) == 0);
  }
}
