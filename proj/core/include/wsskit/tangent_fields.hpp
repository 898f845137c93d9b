#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "wsskit/centerline.hpp"
#include "wsskit/mesh.hpp"

namespace wsskit {

enum class TangentMethod { automatic_t1, automatic_t2, flipped, projected };

std::string_view tangent_method_name(TangentMethod m);

/// Per-vertex unit tangents. Flagged vertices carry a best-effort vector
/// and are excluded from longitudinal statistics downstream.
struct TangentField {
  std::vector<Vec3> vectors;
  TangentMethod method = TangentMethod::automatic_t1;
  std::vector<std::uint8_t> degenerate;
  /// Region (branch section) per vertex; filled by the projection method.
  std::vector<int> regions;

  std::size_t size() const { return vectors.size(); }
  std::size_t degenerate_count() const;
};

/// Mesh-dependent frame: t1 is the direction to the lowest-index neighbour
/// projected onto the tangent plane, t2 = n x t1. Throws
/// Errc::degenerate_vertex for an isolated vertex.
std::pair<TangentField, TangentField> automatic_tangent_basis(const SurfaceMesh& mesh);

/// Overall flow direction for one region label.
struct FlowRegion {
  int label = 0;
  Vec3 v;
};

/// Below this |t2 . v| the sign is taken as +1 and the vertex flagged.
inline constexpr double kFlipSignTolerance = 1e-8;

/// t_l = t2 * sign(t2 . v) with v chosen by each vertex's region label.
/// An empty label span puts every vertex in region 0. Throws
/// Errc::missing_region for a label without a flow vector.
TangentField flip_tangents(const TangentField& t2, std::span<const int> labels, std::span<const FlowRegion> regions,
                           double tolerance = kFlipSignTolerance);

/// Below this |c - (c.n) n| the projection is flagged degenerate.
inline constexpr double kProjectionTolerance = 1e-8;

struct ProjectionOptions {
  /// 1: nearest centerline point; >1: inverse-distance blend of that many.
  std::size_t neighbors = 1;
  double tolerance = kProjectionTolerance;
};

/// t_l = (c - (c.n) n) / |c - (c.n) n| with c the centerline tangent nearest
/// to each vertex. Also records each vertex's nearest section label.
TangentField project_centerline_tangents(const SurfaceMesh& mesh, const Centerline& cl,
                                         const ProjectionOptions& options = {});

/// Flow vectors per centerline section: the normalized chord from the
/// first to the last point of the section.
std::vector<FlowRegion> section_flow_vectors(const Centerline& cl);

/// Mean over mesh edges of 1 - t_a . t_b, skipping edges with a flagged end.
double mean_misalignment(const SurfaceMesh& mesh, const TangentField& field);

/// CSV columns: vertex_id,tx,ty,tz,method,degenerate.
void write_tangents_csv(std::ostream& out, const TangentField& field);
void save_tangents(const std::filesystem::path& path, const TangentField& field);
TangentField load_tangents(const std::filesystem::path& path);

}  // namespace wsskit
