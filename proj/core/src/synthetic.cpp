#include "wsskit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"

namespace wsskit {

SurfaceMesh make_cylinder_mesh(double R, double L, std::size_t n_theta, std::size_t n_z, CapStyle caps) {
  if (n_theta < 8) fail(Errc::bad_resolution, "n_theta must be at least 8");
  if (n_z < 2) fail(Errc::bad_resolution, "n_z must be at least 2");
  if (!(R > 0.0) || !(L > 0.0)) fail(Errc::bad_resolution, "cylinder radius and length must be positive");

  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
  std::vector<Vec3> v;
  v.reserve(n_theta * n_z + 2);
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double a = dtheta * static_cast<double>(j);
    const double x = R * std::cos(a);
    const double y = R * std::sin(a);
    for (std::size_t k = 0; k < n_z; ++k) v.push_back({x, y, L * static_cast<double>(k) / static_cast<double>(n_z - 1)});
  }
  auto lat = [&](std::size_t j, std::size_t k) { return static_cast<std::uint32_t>((j % n_theta) * n_z + k); };

  std::vector<Triangle> t;
  // Quad strip between rings `lo` and `hi`, wound so the normal points away
  // from the axis when `hi` lies above `lo`.
  auto strip = [&](auto lo, auto hi, bool flip_seam) {
    for (std::size_t j = 0; j < n_theta; ++j) {
      if (flip_seam && j + 1 == n_theta) {
        t.push_back({lo(j), lo(j + 1), hi(j + 1)});
        t.push_back({lo(j), hi(j + 1), hi(j)});
      } else {
        t.push_back({lo(j), lo(j + 1), hi(j)});
        t.push_back({lo(j + 1), hi(j + 1), hi(j)});
      }
    }
  };
  for (std::size_t k = 0; k + 1 < n_z; ++k)
    strip([&](std::size_t j) { return lat(j, k); }, [&](std::size_t j) { return lat(j, k + 1); }, true);

  if (caps == CapStyle::flat) {
    const auto b = static_cast<std::uint32_t>(v.size());
    v.push_back({0, 0, 0});
    const auto top = static_cast<std::uint32_t>(v.size());
    v.push_back({0, 0, L});
    for (std::size_t j = 0; j < n_theta; ++j) {
      t.push_back({b, lat(j + 1, 0), lat(j, 0)});
      t.push_back({top, lat(j, n_z - 1), lat(j + 1, n_z - 1)});
    }
  } else if (caps == CapStyle::dome) {
    const std::size_t rings = std::max<std::size_t>(2, n_theta / 4);
    for (int side = 0; side < 2; ++side) {
      const double z0 = side == 0 ? 0.0 : L;
      const double dir = side == 0 ? -1.0 : 1.0;
      const auto base = static_cast<std::uint32_t>(v.size());
      for (std::size_t m = 1; m < rings; ++m) {
        const double alpha = 0.5 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(rings);
        const double r = R * std::cos(alpha);
        for (std::size_t j = 0; j < n_theta; ++j) {
          const double a = dtheta * static_cast<double>(j);
          v.push_back({r * std::cos(a), r * std::sin(a), z0 + dir * R * std::sin(alpha)});
        }
      }
      const auto pole = static_cast<std::uint32_t>(v.size());
      v.push_back({0, 0, z0 + dir * R});
      auto ring = [&, base](std::size_t m) {
        return [&, base, m](std::size_t j) -> std::uint32_t {
          if (m == 0) return lat(j, side == 0 ? 0 : n_z - 1);
          return static_cast<std::uint32_t>(base + (m - 1) * n_theta + j % n_theta);
        };
      };
      for (std::size_t m = 1; m < rings; ++m) {
        if (side == 0)
          strip(ring(m), ring(m - 1), false);
        else
          strip(ring(m - 1), ring(m), false);
      }
      const auto last = ring(rings - 1);
      for (std::size_t j = 0; j < n_theta; ++j) {
        if (side == 0)
          t.push_back({pole, last(j + 1), last(j)});
        else
          t.push_back({pole, last(j), last(j + 1)});
      }
    }
  }
  return SurfaceMesh(std::move(v), std::move(t));
}

double poiseuille_wall_shear(double Q_ml_s, double mu, double R_mm) {
  const double Q = Q_ml_s * 1e-6;  // m^3/s
  const double R = R_mm * 1e-3;    // m
  return 4.0 * mu * Q / (std::numbers::pi * R * R * R);
}

namespace {

void check_tube(const SurfaceMesh& mesh, const PoiseuilleParams& p) {
  if (!(p.R > 0.0)) fail(Errc::bad_argument, "radius must be positive");
  if (!(norm(p.axis) > 0.0)) fail(Errc::bad_argument, "axis must be nonzero");
  const Vec3 a = normalized(p.axis);
  const auto v = mesh.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = norm(reject(v[i] - p.axis_origin, a));
    if (std::abs(r - p.R) > 0.01 * p.R)
      fail(Errc::geometry_mismatch, "vertex " + std::to_string(i) + " lies at radius " + format_roundtrip(r) +
                                        ", more than 1% off R = " + format_roundtrip(p.R));
  }
}

}  // namespace

WallFieldSeries poiseuille_traction(const SurfaceMesh& mesh, const PoiseuilleParams& p, std::vector<double> times) {
  check_tube(mesh, p);
  const Vec3 a = normalized(p.axis);
  const double tau = poiseuille_wall_shear(p.Q, p.mu, p.R);
  const auto n = mesh.normals();
  std::vector<double> slice(3 * mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    const Vec3 tr = tau * a + p.pressure * n[i];
    slice[3 * i] = tr.x;
    slice[3 * i + 1] = tr.y;
    slice[3 * i + 2] = tr.z;
  }
  std::vector<std::vector<double>> samples(times.size(), slice);
  return WallFieldSeries(FieldKind::traction_vector, mesh.vertex_count(), std::move(times), std::move(samples));
}

WallFieldSeries poiseuille_stress(const SurfaceMesh& mesh, const PoiseuilleParams& p, std::vector<double> times) {
  check_tube(mesh, p);
  const Vec3 a = normalized(p.axis);
  const double tau = poiseuille_wall_shear(p.Q, p.mu, p.R);
  const auto v = mesh.vertices();
  std::vector<double> slice(9 * mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    const Vec3 r = normalized(reject(v[i] - p.axis_origin, a));
    for (std::size_t row = 0; row < 3; ++row)
      for (std::size_t col = 0; col < 3; ++col)
        slice[9 * i + 3 * row + col] =
            (row == col ? -p.pressure : 0.0) - tau * (a[row] * r[col] + r[row] * a[col]);
  }
  std::vector<std::vector<double>> samples(times.size(), slice);
  return WallFieldSeries(FieldKind::stress_tensor, mesh.vertex_count(), std::move(times), std::move(samples));
}

Waveform load_waveform(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open waveform " + path);
  Waveform w;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#' || std::isalpha(static_cast<unsigned char>(text.front()))) continue;
    const auto f = split(text, ',');
    if (f.size() != 2) fail(Errc::parse, path + ": waveform rows must be t,q");
    w.push_back({parse_double(f[0], "t"), parse_double(f[1], "q")});
  }
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!(w[i].first > w[i - 1].first)) fail(Errc::parse, path + ": waveform times must increase");
  return w;
}

WallFieldSeries pulsatile_scale(const WallFieldSeries& traction, std::span<const Vec3> normals, const Waveform& waveform,
                                double q_ref) {
  if (traction.kind() != FieldKind::traction_vector)
    fail(Errc::kind_mismatch, "pulsatile_scale expects a traction series");
  if (normals.size() != traction.vertex_count())
    fail(Errc::length_mismatch, "normal count differs from series vertex count");
  if (q_ref == 0.0 || !std::isfinite(q_ref)) fail(Errc::bad_argument, "reference flow must be finite and nonzero");
  if (waveform.empty() || traction.time_count() == 0 || traction.times().front() < waveform.front().first ||
      traction.times().back() > waveform.back().first)
    fail(Errc::window_out_of_range, "waveform does not cover the series times");

  auto q_at = [&](double t) {
    auto hi = std::lower_bound(waveform.begin(), waveform.end(), t,
                               [](const auto& s, double x) { return s.first < x; });
    if (hi->first == t) return hi->second;
    const auto lo = hi - 1;
    const double a = (t - lo->first) / (hi->first - lo->first);
    return lo->second + a * (hi->second - lo->second);
  };

  std::vector<std::vector<double>> samples(traction.time_count());
  for (std::size_t t = 0; t < traction.time_count(); ++t) {
    const double s = q_at(traction.times()[t]) / q_ref;
    auto& out = samples[t];
    out.resize(3 * traction.vertex_count());
    for (std::size_t v = 0; v < traction.vertex_count(); ++v) {
      const Vec3 tr = traction.vector(t, v);
      const double pn = dot(tr, normals[v]);
      const Vec3 scaled = s * (tr - pn * normals[v]) + pn * normals[v];
      out[3 * v] = scaled.x;
      out[3 * v + 1] = scaled.y;
      out[3 * v + 2] = scaled.z;
    }
  }
  WallFieldSeries result(FieldKind::traction_vector, traction.vertex_count(),
                         std::vector<double>(traction.times().begin(), traction.times().end()), std::move(samples));
  result.set_window(traction.window());
  result.set_mask(std::vector<std::uint8_t>(traction.mask().begin(), traction.mask().end()));
  return result;
}

// ---------------------------------------------------------------- Y-junction

namespace {

double capsule(const Vec3& p, const Vec3& a, const Vec3& b, double r) {
  const Vec3 ab = b - a;
  const double h = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return distance(p, a + h * ab) - r;
}

// Polynomial smooth minimum; symmetric in its arguments.
double smooth_min(double a, double b, double k) {
  const double h = std::max(k - std::abs(a - b), 0.0) / k;
  return std::min(a, b) - 0.25 * h * h * k;
}

}  // namespace

std::array<Vec3, 3> y_junction_ends(const YJunctionParams& p) {
  const double half = 0.5 * p.angle_deg * std::numbers::pi / 180.0;
  return {Vec3{0, 0, -p.trunk_length}, p.branch_length * Vec3{std::sin(half), 0, std::cos(half)},
          p.branch_length * Vec3{-std::sin(half), 0, std::cos(half)}};
}

SurfaceMesh make_y_junction_mesh(const YJunctionParams& p) {
  if (!(p.trunk_R > 0.0) || !(p.branch_R1 > 0.0) || !(p.branch_R2 > 0.0) || !(p.trunk_length > 0.0) ||
      !(p.branch_length > 0.0) || !(p.cell > 0.0) || !(p.blend > 0.0))
    fail(Errc::bad_resolution, "Y-junction radii, lengths, cell size and blend must be positive");
  if (p.angle_deg < 10.0 || p.angle_deg > 120.0) fail(Errc::bad_argument, "branch angle must lie in [10, 120] degrees");
  const double rmax = std::max({p.trunk_R, p.branch_R1, p.branch_R2});
  if (p.cell > 0.5 * std::min({p.trunk_R, p.branch_R1, p.branch_R2}))
    fail(Errc::bad_resolution, "cell size must not exceed half the smallest radius");

  const auto ends = y_junction_ends(p);
  if (distance(ends[1], ends[2]) <= p.branch_R1 + p.branch_R2)
    fail(Errc::self_intersection, "branches overlap beyond the junction (tip distance " +
                                      format_roundtrip(distance(ends[1], ends[2])) + " mm)");

  const Vec3 origin{0, 0, 0};
  auto field = [&](const Vec3& q) {
    const double d1 = capsule(q, origin, ends[1], p.branch_R1);
    const double d2 = capsule(q, origin, ends[2], p.branch_R2);
    const double d0 = capsule(q, ends[0], origin, p.trunk_R);
    return smooth_min(d0, smooth_min(d1, d2, p.blend), p.blend);
  };

  // Doubled lattice: integer node (I, J, K) sits at ((I - mx) * h/2, ...).
  // x and y ranges are symmetric about 0 so reflections map nodes to nodes.
  const double pad = rmax + 2.0 * p.cell;
  const double xmax = std::max(std::abs(ends[1].x), std::abs(ends[2].x)) + pad;
  const double ymax = pad;
  const double zmin = ends[0].z - pad;
  const double zmax = std::max(ends[1].z, ends[2].z) + pad;
  const auto cx = static_cast<long>(std::ceil(xmax / p.cell));
  const auto cy = static_cast<long>(std::ceil(ymax / p.cell));
  const auto cz = static_cast<long>(std::ceil((zmax - zmin) / p.cell));
  const long nx = 4 * cx + 1, ny = 4 * cy + 1, nz = 2 * cz + 1;
  const double hh = 0.5 * p.cell;
  auto node_pos = [&](long I, long J, long K) {
    return Vec3{static_cast<double>(I - 2 * cx) * hh, static_cast<double>(J - 2 * cy) * hh,
                zmin + static_cast<double>(K) * hh};
  };
  auto node_id = [&](long I, long J, long K) { return static_cast<std::uint64_t>(I + nx * (J + ny * K)); };

  std::vector<double> f(static_cast<std::size_t>(nx * ny * nz));
  for (long K = 0; K < nz; ++K)
    for (long J = 0; J < ny; ++J)
      for (long I = 0; I < nx; ++I) f[node_id(I, J, K)] = field(node_pos(I, J, K));

  std::vector<Vec3> verts;
  std::vector<Triangle> tris;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
  constexpr double kClampT = 1e-3;
  const std::uint64_t total_nodes = static_cast<std::uint64_t>(nx * ny * nz);

  struct Node {
    long I, J, K;
  };
  auto vertex_on = [&](const Node& a, const Node& b) {
    std::uint64_t ia = node_id(a.I, a.J, a.K), ib = node_id(b.I, b.J, b.K);
    Node na = a, nb = b;
    if (ia > ib) {
      std::swap(ia, ib);
      std::swap(na, nb);
    }
    const std::uint64_t key = ia * total_nodes + ib;
    auto [it, inserted] = edge_vertex.try_emplace(key, static_cast<std::uint32_t>(verts.size()));
    if (inserted) {
      const double fa = f[ia], fb = f[ib];
      const double t = std::clamp(fa / (fa - fb), kClampT, 1.0 - kClampT);
      const Vec3 pa = node_pos(na.I, na.J, na.K);
      const Vec3 pb = node_pos(nb.I, nb.J, nb.K);
      verts.push_back(pa + t * (pb - pa));
    }
    return it->second;
  };
  auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, const Vec3& outward) {
    if (dot(cross(verts[b] - verts[a], verts[c] - verts[a]), outward) < 0.0) std::swap(b, c);
    tris.push_back({a, b, c});
  };
  auto march = [&](const std::array<Node, 4>& tet) {
    std::array<bool, 4> in{};
    int inside = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      in[i] = f[node_id(tet[i].I, tet[i].J, tet[i].K)] < 0.0;
      inside += in[i];
    }
    if (inside == 0 || inside == 4) return;
    Vec3 cin, cout;
    for (std::size_t i = 0; i < 4; ++i) (in[i] ? cin : cout) += node_pos(tet[i].I, tet[i].J, tet[i].K);
    const Vec3 outward = cout / static_cast<double>(4 - inside) - cin / static_cast<double>(inside);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < 4; ++i) (in[i] ? a : b).push_back(i);
    if (a.size() == 1 || b.size() == 1) {
      const auto& lone = a.size() == 1 ? a : b;
      const auto& rest = a.size() == 1 ? b : a;
      emit(vertex_on(tet[lone[0]], tet[rest[0]]), vertex_on(tet[lone[0]], tet[rest[1]]),
           vertex_on(tet[lone[0]], tet[rest[2]]), outward);
    } else {
      const auto p00 = vertex_on(tet[a[0]], tet[b[0]]);
      const auto p01 = vertex_on(tet[a[0]], tet[b[1]]);
      const auto p11 = vertex_on(tet[a[1]], tet[b[1]]);
      const auto p10 = vertex_on(tet[a[1]], tet[b[0]]);
      emit(p00, p01, p11, outward);
      emit(p00, p11, p10, outward);
    }
  };

  // Each cube splits into 24 tets: (face edge, face center, body center).
  static constexpr int kFaces[6][4][3] = {
      {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}}, {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}},
      {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}, {{0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}},
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}};
  for (long k = 0; k < cz; ++k)
    for (long j = 0; j < 2 * cy; ++j)
      for (long i = 0; i < 2 * cx; ++i) {
        const Node body{2 * i + 1, 2 * j + 1, 2 * k + 1};
        for (const auto& face : kFaces) {
          std::array<Node, 4> c;
          long sx = 0, sy = 0, sz = 0;
          for (std::size_t q = 0; q < 4; ++q) {
            c[q] = {2 * i + 2 * face[q][0], 2 * j + 2 * face[q][1], 2 * k + 2 * face[q][2]};
            sx += c[q].I;
            sy += c[q].J;
            sz += c[q].K;
          }
          const Node center{sx / 4, sy / 4, sz / 4};
          for (std::size_t q = 0; q < 4; ++q) march({c[q], c[(q + 1) % 4], center, body});
        }
      }
  if (tris.empty()) fail(Errc::bad_resolution, "Y-junction grid produced no surface");
  return SurfaceMesh(std::move(verts), std::move(tris));
}

// ---------------------------------------------------------------- simple solids

TetMesh make_regular_tetrahedron(double a) {
  const double s = a / (2.0 * std::numbers::sqrt2);
  return TetMesh({s * Vec3{1, 1, 1}, s * Vec3{1, -1, -1}, s * Vec3{-1, 1, -1}, s * Vec3{-1, -1, 1}}, {{0, 1, 2, 3}});
}

TetMesh make_box_tet_mesh(double s, std::size_t n) {
  if (n == 0 || !(s > 0.0)) fail(Errc::bad_resolution, "box mesh needs n >= 1 and s > 0");
  const std::size_t m = n + 1;
  std::vector<Vec3> v;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i)
        v.push_back({s * static_cast<double>(i) / static_cast<double>(n), s * static_cast<double>(j) / static_cast<double>(n),
                     s * static_cast<double>(k) / static_cast<double>(n)});
  auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return static_cast<std::uint32_t>(i + m * (j + m * k)); };
  std::vector<Tetrahedron> t;
  // Kuhn split along the (0,0,0)-(1,1,1) diagonal.
  static constexpr int kPaths[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& path : kPaths) {
          std::array<std::size_t, 3> c{i, j, k};
          Tetrahedron tet;
          tet[0] = id(c[0], c[1], c[2]);
          for (std::size_t q = 0; q < 3; ++q) {
            ++c[path[q]];
            tet[q + 1] = id(c[0], c[1], c[2]);
          }
          t.push_back(tet);
        }
  return TetMesh(std::move(v), std::move(t));
}

SurfaceMesh make_sphere_mesh(double r, std::size_t subdivisions) {
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                         {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  std::vector<Triangle> t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4}, {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},  {9, 8, 1}};
  for (auto& p : v) p = normalized(p);
  for (std::size_t s = 0; s < subdivisions; ++s) {
    std::unordered_map<std::uint64_t, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
      auto [it, inserted] = mid.try_emplace(key, static_cast<std::uint32_t>(v.size()));
      if (inserted) v.push_back(normalized(v[a] + v[b]));
      return it->second;
    };
    std::vector<Triangle> next;
    for (const auto& tri : t) {
      const auto ab = midpoint(tri[0], tri[1]);
      const auto bc = midpoint(tri[1], tri[2]);
      const auto ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    t = std::move(next);
  }
  for (auto& p : v) p *= r;
  return SurfaceMesh(std::move(v), std::move(t));
}

// ---------------------------------------------------------------- cases

SyntheticCase poiseuille_case(const PoiseuilleParams& params, double L, std::size_t n_theta, std::size_t n_z,
                              std::vector<double> times) {
  SyntheticCase c;
  c.name = "poiseuille";
  c.mesh = make_cylinder_mesh(params.R, L, n_theta, n_z, CapStyle::none);
  c.traction = poiseuille_traction(c.mesh, params, std::move(times));
  const double tau = poiseuille_wall_shear(params.Q, params.mu, params.R);
  const std::size_t n = c.mesh.vertex_count();
  c.wss_amplitude.assign(n, std::abs(tau));
  c.wss_longitudinal.assign(n, tau);
  c.osi.assign(n, 0.0);
  c.osi_longitudinal.assign(n, tau >= 0.0 ? 0.0 : 1.0);
  c.tolerance = 1e-9 * std::max(1.0, std::abs(tau));
  return c;
}

SyntheticCase square_wave_case(const PoiseuilleParams& params, double L, std::size_t n_theta, std::size_t n_z,
                               double q_hi, double q_lo, double t0, double t1, std::size_t samples) {
  if (samples < 5 || samples % 2 == 0) fail(Errc::bad_resolution, "square wave needs an odd sample count >= 5");
  if (!(t1 > t0)) fail(Errc::bad_argument, "square wave needs t1 > t0");
  const std::size_t N = samples - 1;
  const double dt = (t1 - t0) / static_cast<double>(N);
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i) times[i] = t0 + dt * static_cast<double>(i);
  times.back() = t1;
  const std::size_t h = N / 2;
  // Levels hold up to the neighbouring samples of the mid instant, where q = 0.
  const Waveform wave = {{times[0], q_hi}, {times[h - 1], q_hi}, {times[h], 0.0}, {times[h + 1], q_lo}, {times[N], q_lo}};

  SyntheticCase c = poiseuille_case(params, L, n_theta, n_z, times);
  c.name = "square_wave";
  c.traction = pulsatile_scale(c.traction, c.mesh.normals(), wave, params.Q);

  // Trapezoid integrals of the sampled signal, exact for this piecewise-linear signal.
  const double tau = poiseuille_wall_shear(params.Q, params.mu, params.R) / params.Q;
  const double pos = tau * q_hi * dt * static_cast<double>(N - 1) / 2.0;
  const double neg = tau * q_lo * dt * static_cast<double>(N - 1) / 2.0;
  const double mean_abs = std::abs(pos) + std::abs(neg);
  const std::size_t n = c.mesh.vertex_count();
  c.osi_longitudinal.assign(n, 0.5 * (1.0 - (pos + neg) / mean_abs));
  c.osi.assign(n, 0.5 * (1.0 - std::abs(pos + neg) / mean_abs));
  c.wss_amplitude.clear();
  c.wss_longitudinal.clear();
  c.tolerance = 1e-12;
  return c;
}

}  // namespace wsskit
