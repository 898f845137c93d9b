#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "wsskit/geometry.hpp"
#include "wsskit/mesh.hpp"
#include "wsskit/spatial.hpp"

namespace wsskit {

struct CenterlineBranch {
  std::vector<Vec3> points;    // mm, ordered from the source to the target
  std::vector<double> radii;   // inscribed-sphere radius per point (mm)
  std::vector<Vec3> tangents;  // unit, pointing towards the target
  int parent = -1;             // branch sharing the longest leading run of points
  std::size_t shared_prefix = 0;  // number of leading points identical to the parent's
};

/// Branched centerline. `sections[b][k]` labels the set of branches passing
/// through point k of branch b: 0 for the common trunk, then one label per
/// distinct branch set in order of first appearance.
struct Centerline {
  std::vector<CenterlineBranch> branches;
  std::vector<std::vector<int>> sections;

  std::size_t point_count() const;
  int section_count() const;
};

struct CenterlineOptions {
  double spacing = 0.05;            // resampling step (mm)
  std::size_t neighbors = 8;        // k of the interior k-nearest-neighbour graph
  std::size_t smoothing_window = 5;  // centered moving average, odd
  double merge_factor = 0.5;        // candidate suppression radius / mean edge length
  std::uint64_t seed = 0;           // perturbation seed for the Delaunay step
};

/// Centerline of a closed tubular mesh from `source` to each target.
/// Candidate points are interior poles of the Delaunay tetrahedralization
/// of the surface vertices; they are linked by a k-nearest-neighbour graph
/// whose edges must have an interior midpoint, and each branch is the
/// shortest path under cost length / min(clearance). Branches are resampled
/// from the source at `spacing`, smoothed, and carry radii recomputed as
/// the distance to the nearest surface vertex.
/// Errors: Errc::point_outside_lumen, Errc::no_path_found, Errc::bad_argument.
Centerline extract_centerline(const SurfaceMesh& mesh, const Vec3& source, std::span<const Vec3> targets,
                              const CenterlineOptions& options = {});

/// Central-difference unit tangents (one-sided at the ends) for one branch.
/// Throws Errc::too_few_points for fewer than two points.
std::vector<Vec3> centerline_tangents(std::span<const Vec3> points);

/// Builds a centerline from explicit branch polylines and radii; computes
/// tangents, the branch tree and section labels.
Centerline make_centerline(std::vector<std::vector<Vec3>> points, std::vector<std::vector<double>> radii);

/// Recomputes parent links, shared prefixes and section labels.
void update_topology(Centerline& cl);

/// CSV columns: branch_id,point_index,x,y,z,radius,tx,ty,tz.
void write_centerline_csv(std::ostream& out, const Centerline& cl);
void save_centerline(const std::filesystem::path& path, const Centerline& cl);
Centerline read_centerline_csv(std::istream& in);
Centerline load_centerline(const std::filesystem::path& path);

/// Nearest-point queries against all centerline points. Ties resolve to
/// the lowest (branch, point) pair.
class CenterlineLocator {
 public:
  struct Hit {
    std::uint32_t branch = 0;
    std::uint32_t point = 0;
    double distance = 0.0;
  };

  explicit CenterlineLocator(const Centerline& cl);

  Hit nearest(const Vec3& q) const;
  std::vector<Hit> k_nearest(const Vec3& q, std::size_t k) const;

  const Vec3& tangent(const Hit& h) const { return cl_->branches[h.branch].tangents[h.point]; }
  int section(const Hit& h) const { return cl_->sections[h.branch][h.point]; }

 private:
  const Centerline* cl_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ids_;
  KdTree tree_;
};

}  // namespace wsskit
