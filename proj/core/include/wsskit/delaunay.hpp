#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wsskit/geometry.hpp"
#include "wsskit/mesh.hpp"

namespace wsskit {

/// Sign of det[b-a, c-a, d-a]: +1 when (a, b, c, d) is positively oriented.
/// Floating-point filter with an exact rational fallback.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// For a positively oriented tet (a, b, c, d): +1 if e lies strictly inside
/// its circumsphere, -1 if strictly outside, 0 if on it. Exact.
int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e);

/// Circumcenter of tet (a, b, c, d); non-finite for flat tets.
Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Delaunay tetrahedralization (incremental Bowyer-Watson, Morton insertion
/// order). Returned tets are positively oriented and cover the convex hull.
/// Returns nullopt when a degenerate configuration (duplicate points, five
/// cospherical points producing a flat tet) stops the construction; callers
/// are expected to perturb the input and retry.
std::optional<std::vector<Tetrahedron>> delaunay_tetrahedralize(std::span<const Vec3> points);

}  // namespace wsskit
