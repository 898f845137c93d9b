#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wsskit/geometry.hpp"
#include "wsskit/mesh.hpp"

namespace wsskit {

struct Neighbor {
  std::uint32_t index = 0;
  double squared_distance = 0.0;
};

/// Static kd-tree over a point set. Query results are ordered by
/// (squared distance, index), so ties resolve to the lowest index.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points);

  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::uint32_t i) const { return points_[i]; }

  Neighbor nearest(const Vec3& q) const;
  std::vector<Neighbor> k_nearest(const Vec3& q, std::size_t k) const;
  std::vector<Neighbor> within_radius(const Vec3& q, double radius) const;

 private:
  void build(std::size_t lo, std::size_t hi, int depth);
  void search_nearest(std::size_t lo, std::size_t hi, const Vec3& q, Neighbor& best) const;
  void search_k(std::size_t lo, std::size_t hi, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const;
  void search_radius(std::size_t lo, std::size_t hi, const Vec3& q, double r2, std::vector<Neighbor>& out) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint8_t> split_dim_;  // indexed by node midpoint
};

/// Bounding volume hierarchy over primitive boxes (median split on the
/// longest axis). Primitive-specific queries are supplied as callbacks.
class Bvh {
 public:
  Bvh() = default;
  explicit Bvh(std::vector<Aabb> boxes);

  /// Visits primitives in near-to-far box order and keeps the best value of
  /// `distance2(prim)`; returns the primitive index (or -1 when empty).
  /// Ties resolve to the lowest primitive index.
  std::int64_t nearest(const Vec3& q, const std::function<double(std::uint32_t)>& distance2,
                       double* best_distance2 = nullptr) const;

  /// Calls visit(prim) for every primitive whose box the query box overlaps.
  void overlapping(const Aabb& box, const std::function<void(std::uint32_t)>& visit) const;

  /// Calls visit(prim) for every primitive whose box the ray (origin, dir) hits.
  void ray_candidates(const Vec3& origin, const Vec3& dir, const std::function<void(std::uint32_t)>& visit) const;

 private:
  struct Node {
    Aabb box;
    std::uint32_t left = 0;   // child index, or first primitive for leaves
    std::uint32_t right = 0;  // child index, or primitive count for leaves
    bool leaf = false;
  };
  std::uint32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Aabb> boxes_;
  std::vector<std::uint32_t> prims_;
  std::vector<Node> nodes_;
};

struct SurfaceHit {
  std::uint32_t triangle = 0;
  ClosestPoint closest;
  double squared_distance = 0.0;
};

/// Closest-point and inside/outside queries against a triangle surface.
class SurfaceLocator {
 public:
  explicit SurfaceLocator(const SurfaceMesh& mesh);

  SurfaceHit closest(const Vec3& q) const;

  /// Ray-parity containment for closed meshes; majority vote over three
  /// fixed skew directions.
  bool contains(const Vec3& q) const;

 private:
  int crossings(const Vec3& origin, const Vec3& dir) const;

  const SurfaceMesh* mesh_;
  Bvh bvh_;
};

}  // namespace wsskit
