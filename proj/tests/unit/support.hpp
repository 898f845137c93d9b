#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsskit/centerline.hpp"
#include "wsskit/error.hpp"
#include "wsskit/field_series.hpp"
#include "wsskit/mesh.hpp"
#include "wsskit/mesh_io.hpp"
#include "wsskit/pipeline.hpp"
#include "wsskit/synthetic.hpp"

namespace wsskit::test {

inline std::filesystem::path data_dir() { return WSSKIT_TEST_DATA; }

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() / ("wsskit_test_" + name);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

// n x n square grid on [0,1]^2 in the plane z = 0, counter-clockwise seen from +z.
inline SurfaceMesh flat_patch(std::size_t n) {
  std::vector<Vec3> v;
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) v.push_back({double(i) / double(n), double(j) / double(n), 0.0});
  std::vector<Triangle> t;
  auto id = [n](std::size_t i, std::size_t j) { return std::uint32_t(j * (n + 1) + i); };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return SurfaceMesh(std::move(v), std::move(t));
}

// Closed torus about the z axis: ring radius rc, tube radius r.
inline SurfaceMesh torus(double rc, double r, std::size_t n_ring, std::size_t n_tube) {
  std::vector<Vec3> v;
  for (std::size_t i = 0; i < n_ring; ++i) {
    const double u = 2.0 * std::numbers::pi * double(i) / double(n_ring);
    for (std::size_t j = 0; j < n_tube; ++j) {
      const double w = 2.0 * std::numbers::pi * double(j) / double(n_tube);
      const double rr = rc + r * std::cos(w);
      v.push_back({rr * std::cos(u), rr * std::sin(u), r * std::sin(w)});
    }
  }
  std::vector<Triangle> t;
  auto id = [&](std::size_t i, std::size_t j) { return std::uint32_t((i % n_ring) * n_tube + j % n_tube); };
  for (std::size_t i = 0; i < n_ring; ++i)
    for (std::size_t j = 0; j < n_tube; ++j) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return SurfaceMesh(std::move(v), std::move(t));
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    const Vec3 v{g(rng), g(rng), g(rng)};
    const double n = norm(v);
    if (n > 1e-3) return v / n;
  }
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Scalar series with one vertex: s(t_i) = values[i].
inline WallFieldSeries scalar_series(std::vector<double> times, const std::vector<double>& values) {
  std::vector<std::vector<double>> samples;
  for (double x : values) samples.push_back({x});
  return WallFieldSeries(FieldKind::scalar, 1, std::move(times), std::move(samples));
}

// Vector series with one vertex.
inline WallFieldSeries vector_series(std::vector<double> times, const std::vector<Vec3>& values) {
  std::vector<std::vector<double>> samples;
  for (const auto& x : values) samples.push_back({x.x, x.y, x.z});
  return WallFieldSeries(FieldKind::traction_vector, 1, std::move(times), std::move(samples));
}

inline std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * double(i) / double(n - 1);
  t.back() = t1;
  return t;
}

// Code of the wsskit::Error thrown by f.
template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a wsskit::Error");
}

// Shared fixtures, built once per process.
inline const SurfaceMesh& capped_cylinder() {
  static const auto mesh = make_cylinder_mesh(3.0, 40.0, 48, 64, CapStyle::dome);
  return mesh;
}

inline const Centerline& cylinder_centerline() {
  static const auto cl = [] {
    CenterlineOptions opt;
    opt.spacing = 0.5;
    const Vec3 target{0, 0, 40};
    return extract_centerline(capped_cylinder(), {0, 0, 0}, std::span(&target, 1), opt);
  }();
  return cl;
}

inline const YJunctionParams& y_params() {
  static const YJunctionParams p = [] {
    YJunctionParams q;
    q.trunk_length = 12.0;
    q.branch_length = 12.0;
    q.cell = 0.6;
    return q;
  }();
  return p;
}

inline const SurfaceMesh& y_mesh() {
  static const auto mesh = make_y_junction_mesh(y_params());
  return mesh;
}

inline const Centerline& y_centerline() {
  static const auto cl = [] {
    const auto ends = y_junction_ends(y_params());
    const std::vector<Vec3> targets{ends[1], ends[2]};
    CenterlineOptions opt;
    opt.spacing = 0.5;
    return extract_centerline(y_mesh(), ends[0], targets, opt);
  }();
  return cl;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Poiseuille inputs on an open cylinder written into dir: mesh, traction
// manifest and the straight axis as centerline. Returns a ready config.
inline PipelineConfig poiseuille_inputs(const std::filesystem::path& dir, std::size_t n_theta = 24,
                                        std::size_t n_z = 30) {
  PoiseuilleParams p;
  const auto mesh = make_cylinder_mesh(p.R, 30.0, n_theta, n_z);
  save_off(dir / "cylinder.off", mesh);
  const auto traction = poiseuille_traction(mesh, p, uniform_times(0.0, 0.9, 10));
  PipelineConfig config;
  config.series = save_series(dir, "traction", traction, "cylinder.off");
  config.centerline = dir / "axis.csv";
  save_centerline(config.centerline, make_centerline({{{0, 0, -1}, {0, 0, 31}}}, {{p.R, p.R}}));
  config.output = dir / "out";
  return config;
}

}  // namespace wsskit::test
