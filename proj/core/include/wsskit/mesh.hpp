#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wsskit/geometry.hpp"

namespace wsskit {

using Triangle = std::array<std::uint32_t, 3>;
using Tetrahedron = std::array<std::uint32_t, 4>;
using Edge = std::array<std::uint32_t, 2>;

inline constexpr double kMinTriangleArea = 1e-12;  // mm^2

struct MeshOptions {
  /// Flip the orientation of open components after winding repair.
  bool flip_open = false;
};

/// Triangulated vessel wall. Immutable once constructed: the constructor
/// validates indices, rejects degenerate and non-manifold input, makes the
/// winding consistent, orients closed components outward and computes
/// area-weighted unit vertex normals.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles, MeshOptions options = {});

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Vec3> normals() const { return normals_; }
  std::span<const Edge> edges() const { return edges_; }

  /// Sorted one-ring neighbours of vertex v.
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {adjacency_.data() + adjacency_offsets_[v], adjacency_.data() + adjacency_offsets_[v + 1]};
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  /// Every edge shared by exactly two triangles.
  bool closed() const { return closed_; }

  /// Optional per-vertex region (branch) identifiers; empty when absent.
  std::span<const int> region_labels() const { return region_labels_; }
  SurfaceMesh with_region_labels(std::vector<int> labels) const;

  /// Number of triangles whose winding was reversed during construction.
  std::size_t reoriented_triangles() const { return reoriented_; }

  /// Copy with every vertex mapped by x -> rotation * x + translation.
  SurfaceMesh transformed(const Mat3& rotation, const Vec3& translation) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> adjacency_offsets_;
  std::vector<std::uint32_t> adjacency_;
  std::vector<int> region_labels_;
  std::size_t reoriented_ = 0;
  bool closed_ = false;
};

/// Area-weighted average of incident face normals, normalised. Throws
/// Errc::degenerate_vertex for a vertex without non-degenerate incident faces.
std::vector<Vec3> vertex_normals(std::span<const Vec3> vertices, std::span<const Triangle> triangles);
inline std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh) {
  return vertex_normals(mesh.vertices(), mesh.triangles());
}

double surface_area(const SurfaceMesh& mesh);

/// Lumped (P1) vertex areas: a third of each incident triangle area.
std::vector<double> lumped_vertex_areas(const SurfaceMesh& mesh);

/// Tetrahedral volume mesh, used for mesh-size statistics and volume-measure
/// convergence studies. Tets are reordered to positive signed volume.
class TetMesh {
 public:
  TetMesh() = default;
  TetMesh(std::vector<Vec3> vertices, std::vector<Tetrahedron> tets);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Tetrahedron> tets() const { return tets_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t tet_count() const { return tets_.size(); }

  TetMesh scaled(double factor) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Tetrahedron> tets_;
};

double tet_volume(const TetMesh& mesh, std::size_t t);

/// Lumped (P1) vertex volumes: a quarter of each incident tet volume.
std::vector<double> lumped_vertex_volumes(const TetMesh& mesh);

/// Mean over tets of the insphere diameter 6V/A (mm). Throws Errc::empty_mesh.
double mean_mesh_size(const TetMesh& mesh);

/// Surface analogue: mean over triangles of the incircle diameter 4A/P (mm).
double mean_mesh_size(const SurfaceMesh& mesh);

}  // namespace wsskit
