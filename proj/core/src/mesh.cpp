#include "wsskit/mesh.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_map>

#include "wsskit/error.hpp"

namespace wsskit {
namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct HalfEdgeUse {
  std::uint32_t tri;
  std::uint32_t from;  // directed edge from -> to as stored in the triangle
  std::uint32_t to;
};

void flip(Triangle& t) { std::swap(t[1], t[2]); }

bool has_directed_edge(const Triangle& t, std::uint32_t from, std::uint32_t to) {
  for (int i = 0; i < 3; ++i)
    if (t[i] == from && t[(i + 1) % 3] == to) return true;
  return false;
}

}  // namespace

std::vector<Vec3> vertex_normals(std::span<const Vec3> vertices, std::span<const Triangle> triangles) {
  std::vector<Vec3> acc(vertices.size());
  std::vector<std::uint8_t> touched(vertices.size(), 0);
  for (const auto& t : triangles) {
    // |cross| is twice the area, so the sum is area weighted.
    const Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
    for (auto v : t) {
      acc[v] += n;
      touched[v] = 1;
    }
  }
  for (std::size_t v = 0; v < acc.size(); ++v) {
    const double len = norm(acc[v]);
    if (!touched[v] || !(len > 0.0))
      fail(Errc::degenerate_vertex, "vertex " + std::to_string(v) + " has no non-degenerate incident face");
    acc[v] = acc[v] / len;
  }
  return acc;
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles, MeshOptions options)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<std::uint32_t>(vertices_.size());
  if (triangles_.empty()) fail(Errc::empty_mesh, "surface mesh has no triangles");

  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const auto& t = triangles_[i];
    for (auto v : t)
      if (v >= nv)
        fail(Errc::parse, "triangle " + std::to_string(i) + " references vertex " + std::to_string(v) +
                              " of " + std::to_string(nv));
    const double area = triangle_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (!(area > kMinTriangleArea))
      fail(Errc::topology, "degenerate triangle " + std::to_string(i));
  }

  // Edge -> incident triangle uses.
  std::unordered_map<std::uint64_t, std::vector<HalfEdgeUse>> uses;
  uses.reserve(triangles_.size() * 2);
  for (std::uint32_t i = 0; i < triangles_.size(); ++i) {
    const auto& t = triangles_[i];
    for (int k = 0; k < 3; ++k) {
      const auto a = t[k];
      const auto b = t[(k + 1) % 3];
      auto& list = uses[edge_key(a, b)];
      list.push_back({i, a, b});
      if (list.size() > 2)
        fail(Errc::topology, "non-manifold edge (" + std::to_string(std::min(a, b)) + ", " +
                                 std::to_string(std::max(a, b)) + ") shared by more than two triangles");
    }
  }

  // Consistent winding per connected component, breadth first from the
  // lowest triangle index of each component.
  const std::size_t nt = triangles_.size();
  std::vector<int> component(nt, -1);
  std::vector<std::uint8_t> flipped(nt, 0);
  std::vector<std::vector<std::uint32_t>> members;
  for (std::uint32_t seed = 0; seed < nt; ++seed) {
    if (component[seed] >= 0) continue;
    const int cid = static_cast<int>(members.size());
    members.emplace_back();
    std::queue<std::uint32_t> queue;
    queue.push(seed);
    component[seed] = cid;
    while (!queue.empty()) {
      const auto ti = queue.front();
      queue.pop();
      members[cid].push_back(ti);
      const Triangle t = triangles_[ti];
      for (int k = 0; k < 3; ++k) {
        const auto a = t[k];
        const auto b = t[(k + 1) % 3];
        for (const auto& use : uses[edge_key(a, b)]) {
          if (use.tri == ti) continue;
          // Consistent neighbours traverse the shared edge as b -> a.
          const bool consistent = has_directed_edge(triangles_[use.tri], b, a);
          if (component[use.tri] < 0) {
            component[use.tri] = cid;
            if (!consistent) {
              flip(triangles_[use.tri]);
              flipped[use.tri] ^= 1;
            }
            queue.push(use.tri);
          } else if (!consistent) {
            fail(Errc::topology, "non-orientable surface at edge (" + std::to_string(std::min(a, b)) + ", " +
                                     std::to_string(std::max(a, b)) + ")");
          }
        }
      }
    }
  }

  closed_ = true;
  std::vector<std::uint8_t> component_closed(members.size(), 1);
  for (const auto& [key, list] : uses) {
    if (list.size() != 2) {
      closed_ = false;
      component_closed[component[list.front().tri]] = 0;
    }
  }

  for (std::size_t c = 0; c < members.size(); ++c) {
    bool reverse = false;
    if (component_closed[c]) {
      double volume = 0.0;
      for (auto ti : members[c]) {
        const auto& t = triangles_[ti];
        volume += triple_product(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
      }
      reverse = volume < 0.0;
    } else {
      std::size_t changed = 0;
      for (auto ti : members[c]) changed += flipped[ti];
      reverse = 2 * changed > members[c].size();
      if (options.flip_open) reverse = !reverse;
    }
    if (reverse)
      for (auto ti : members[c]) {
        flip(triangles_[ti]);
        flipped[ti] ^= 1;
      }
  }
  for (auto f : flipped) reoriented_ += f;

  normals_ = vertex_normals(vertices_, triangles_);

  // Unique undirected edges and CSR one-ring adjacency.
  edges_.reserve(uses.size());
  for (const auto& [key, list] : uses)
    edges_.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu)});
  std::sort(edges_.begin(), edges_.end());

  adjacency_offsets_.assign(nv + 1, 0);
  for (const auto& e : edges_) {
    ++adjacency_offsets_[e[0] + 1];
    ++adjacency_offsets_[e[1] + 1];
  }
  for (std::size_t v = 0; v < nv; ++v) adjacency_offsets_[v + 1] += adjacency_offsets_[v];
  adjacency_.resize(adjacency_offsets_.back());
  std::vector<std::uint32_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e[0]]++] = e[1];
    adjacency_[fill[e[1]]++] = e[0];
  }
  for (std::size_t v = 0; v < nv; ++v)
    std::sort(adjacency_.begin() + adjacency_offsets_[v], adjacency_.begin() + adjacency_offsets_[v + 1]);
}

SurfaceMesh SurfaceMesh::with_region_labels(std::vector<int> labels) const {
  if (!labels.empty() && labels.size() != vertices_.size())
    fail(Errc::length_mismatch, "region label count " + std::to_string(labels.size()) +
                                    " != vertex count " + std::to_string(vertices_.size()));
  SurfaceMesh copy = *this;
  copy.region_labels_ = std::move(labels);
  return copy;
}

SurfaceMesh SurfaceMesh::transformed(const Mat3& rotation, const Vec3& translation) const {
  std::vector<Vec3> moved(vertices_.size());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = rotation * vertices_[i] + translation;
  SurfaceMesh out(std::move(moved), triangles_);
  out.region_labels_ = region_labels_;
  return out;
}

double surface_area(const SurfaceMesh& mesh) {
  const auto v = mesh.vertices();
  double total = 0.0;
  for (const auto& t : mesh.triangles()) total += triangle_area(v[t[0]], v[t[1]], v[t[2]]);
  return total;
}

std::vector<double> lumped_vertex_areas(const SurfaceMesh& mesh) {
  const auto v = mesh.vertices();
  std::vector<double> w(mesh.vertex_count(), 0.0);
  for (const auto& t : mesh.triangles()) {
    const double third = triangle_area(v[t[0]], v[t[1]], v[t[2]]) / 3.0;
    for (auto i : t) w[i] += third;
  }
  return w;
}

TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<Tetrahedron> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  const auto nv = vertices_.size();
  for (std::size_t i = 0; i < tets_.size(); ++i) {
    auto& t = tets_[i];
    for (auto v : t)
      if (v >= nv) fail(Errc::parse, "tet " + std::to_string(i) + " references vertex " + std::to_string(v));
    const double vol = tet_signed_volume(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]], vertices_[t[3]]);
    if (vol == 0.0) fail(Errc::topology, "degenerate tet " + std::to_string(i));
    if (vol < 0.0) std::swap(t[2], t[3]);
  }
}

TetMesh TetMesh::scaled(double factor) const {
  std::vector<Vec3> v(vertices_.begin(), vertices_.end());
  for (auto& p : v) p *= factor;
  return TetMesh(std::move(v), tets_);
}

double tet_volume(const TetMesh& mesh, std::size_t t) {
  const auto v = mesh.vertices();
  const auto& q = mesh.tets()[t];
  return tet_signed_volume(v[q[0]], v[q[1]], v[q[2]], v[q[3]]);
}

std::vector<double> lumped_vertex_volumes(const TetMesh& mesh) {
  std::vector<double> w(mesh.vertex_count(), 0.0);
  for (std::size_t t = 0; t < mesh.tet_count(); ++t) {
    const double quarter = tet_volume(mesh, t) / 4.0;
    for (auto i : mesh.tets()[t]) w[i] += quarter;
  }
  return w;
}

double mean_mesh_size(const TetMesh& mesh) {
  if (mesh.tet_count() == 0) fail(Errc::empty_mesh, "tet mesh has no elements");
  const auto v = mesh.vertices();
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.tet_count(); ++t) {
    const auto& q = mesh.tets()[t];
    const double area = triangle_area(v[q[1]], v[q[2]], v[q[3]]) + triangle_area(v[q[0]], v[q[2]], v[q[3]]) +
                        triangle_area(v[q[0]], v[q[1]], v[q[3]]) + triangle_area(v[q[0]], v[q[1]], v[q[2]]);
    // insphere radius 3V/A
    sum += 2.0 * (3.0 * tet_volume(mesh, t) / area);
  }
  return sum / static_cast<double>(mesh.tet_count());
}

double mean_mesh_size(const SurfaceMesh& mesh) {
  if (mesh.triangle_count() == 0) fail(Errc::empty_mesh, "surface mesh has no elements");
  const auto v = mesh.vertices();
  double sum = 0.0;
  for (const auto& t : mesh.triangles()) {
    const double perimeter = distance(v[t[0]], v[t[1]]) + distance(v[t[1]], v[t[2]]) + distance(v[t[2]], v[t[0]]);
    sum += 4.0 * triangle_area(v[t[0]], v[t[1]], v[t[2]]) / perimeter;
  }
  return sum / static_cast<double>(mesh.triangle_count());
}

}  // namespace wsskit
