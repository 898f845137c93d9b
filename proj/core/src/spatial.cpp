#include "wsskit/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wsskit {
namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.squared_distance < b.squared_distance ||
         (a.squared_distance == b.squared_distance && a.index < b.index);
}

}  // namespace

// ---------------------------------------------------------------- KdTree

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  split_dim_.assign(points_.size(), 0);
  build(0, points_.size(), 0);
}

void KdTree::build(std::size_t lo, std::size_t hi, int depth) {
  if (hi - lo <= 1) return;
  Aabb box;
  for (std::size_t i = lo; i < hi; ++i) box.expand(points_[order_[i]]);
  const Vec3 ext = box.extent();
  const std::uint8_t dim = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][dim];
                     const double pb = points_[b][dim];
                     return pa < pb || (pa == pb && a < b);
                   });
  split_dim_[mid] = dim;
  build(lo, mid, depth + 1);
  build(mid + 1, hi, depth + 1);
}

void KdTree::search_nearest(std::size_t lo, std::size_t hi, const Vec3& q, Neighbor& best) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto idx = order_[mid];
  const Neighbor cand{idx, squared_distance(q, points_[idx])};
  if (closer(cand, best)) best = cand;
  if (hi - lo == 1) return;
  const auto dim = split_dim_[mid];
  const double diff = q[dim] - points_[idx][dim];
  if (diff < 0) {
    search_nearest(lo, mid, q, best);
    if (diff * diff <= best.squared_distance) search_nearest(mid + 1, hi, q, best);
  } else {
    search_nearest(mid + 1, hi, q, best);
    if (diff * diff <= best.squared_distance) search_nearest(lo, mid, q, best);
  }
}

Neighbor KdTree::nearest(const Vec3& q) const {
  Neighbor best{std::numeric_limits<std::uint32_t>::max(), std::numeric_limits<double>::infinity()};
  search_nearest(0, points_.size(), q, best);
  return best;
}

void KdTree::search_k(std::size_t lo, std::size_t hi, const Vec3& q, std::size_t k,
                      std::vector<Neighbor>& heap) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto idx = order_[mid];
  const Neighbor cand{idx, squared_distance(q, points_[idx])};
  if (heap.size() < k) {
    heap.push_back(cand);
    std::push_heap(heap.begin(), heap.end(), closer);
  } else if (closer(cand, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), closer);
    heap.back() = cand;
    std::push_heap(heap.begin(), heap.end(), closer);
  }
  if (hi - lo == 1) return;
  const auto dim = split_dim_[mid];
  const double diff = q[dim] - points_[idx][dim];
  const auto worst = [&] {
    return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front().squared_distance;
  };
  if (diff < 0) {
    search_k(lo, mid, q, k, heap);
    if (diff * diff <= worst()) search_k(mid + 1, hi, q, k, heap);
  } else {
    search_k(mid + 1, hi, q, k, heap);
    if (diff * diff <= worst()) search_k(lo, mid, q, k, heap);
  }
}

std::vector<Neighbor> KdTree::k_nearest(const Vec3& q, std::size_t k) const {
  std::vector<Neighbor> heap;
  if (k == 0) return heap;
  heap.reserve(k + 1);
  search_k(0, points_.size(), q, k, heap);
  std::sort(heap.begin(), heap.end(), closer);
  return heap;
}

void KdTree::search_radius(std::size_t lo, std::size_t hi, const Vec3& q, double r2,
                           std::vector<Neighbor>& out) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto idx = order_[mid];
  const double d2 = squared_distance(q, points_[idx]);
  if (d2 <= r2) out.push_back({idx, d2});
  if (hi - lo == 1) return;
  const auto dim = split_dim_[mid];
  const double diff = q[dim] - points_[idx][dim];
  if (diff <= 0 || diff * diff <= r2) search_radius(lo, mid, q, r2, out);
  if (diff >= 0 || diff * diff <= r2) search_radius(mid + 1, hi, q, r2, out);
}

std::vector<Neighbor> KdTree::within_radius(const Vec3& q, double radius) const {
  std::vector<Neighbor> out;
  search_radius(0, points_.size(), q, radius * radius, out);
  std::sort(out.begin(), out.end(), closer);
  return out;
}

// ---------------------------------------------------------------- Bvh

Bvh::Bvh(std::vector<Aabb> boxes) : boxes_(std::move(boxes)) {
  prims_.resize(boxes_.size());
  for (std::uint32_t i = 0; i < prims_.size(); ++i) prims_[i] = i;
  if (!prims_.empty()) {
    nodes_.reserve(2 * prims_.size() / 2 + 1);
    build(0, static_cast<std::uint32_t>(prims_.size()));
  }
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  for (auto i = begin; i < end; ++i) box.expand(boxes_[prims_[i]]);
  if (end - begin <= 4) {
    nodes_[id] = {box, begin, end - begin, true};
    return id;
  }
  Aabb centers;
  for (auto i = begin; i < end; ++i) centers.expand(boxes_[prims_[i]].center());
  const Vec3 ext = centers.extent();
  const int dim = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
  const auto mid = begin + (end - begin) / 2;
  std::nth_element(prims_.begin() + begin, prims_.begin() + mid, prims_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = boxes_[a].center()[dim];
                     const double cb = boxes_[b].center()[dim];
                     return ca < cb || (ca == cb && a < b);
                   });
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id] = {box, left, right, false};
  return id;
}

std::int64_t Bvh::nearest(const Vec3& q, const std::function<double(std::uint32_t)>& distance2,
                          double* best_distance2) const {
  std::int64_t best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return best;
  std::vector<std::pair<double, std::uint32_t>> stack;
  stack.emplace_back(nodes_[0].box.squared_distance(q), 0);
  while (!stack.empty()) {
    const auto [box_d2, id] = stack.back();
    stack.pop_back();
    if (box_d2 > best_d2) continue;
    const Node& node = nodes_[id];
    if (node.leaf) {
      for (std::uint32_t i = node.left; i < node.left + node.right; ++i) {
        const auto prim = prims_[i];
        const double d2 = distance2(prim);
        if (d2 < best_d2 || (d2 == best_d2 && prim < best)) {
          best_d2 = d2;
          best = prim;
        }
      }
      continue;
    }
    const double dl = nodes_[node.left].box.squared_distance(q);
    const double dr = nodes_[node.right].box.squared_distance(q);
    // Push the farther child first so the nearer one is visited next.
    if (dl <= dr) {
      stack.emplace_back(dr, node.right);
      stack.emplace_back(dl, node.left);
    } else {
      stack.emplace_back(dl, node.left);
      stack.emplace_back(dr, node.right);
    }
  }
  if (best_distance2) *best_distance2 = best_d2;
  return best;
}

void Bvh::overlapping(const Aabb& box, const std::function<void(std::uint32_t)>& visit) const {
  if (nodes_.empty()) return;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    bool hit = true;
    for (std::size_t k = 0; k < 3; ++k)
      if (node.box.hi[k] < box.lo[k] || node.box.lo[k] > box.hi[k]) hit = false;
    if (!hit) continue;
    if (node.leaf) {
      for (std::uint32_t i = node.left; i < node.left + node.right; ++i) visit(prims_[i]);
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
}

void Bvh::ray_candidates(const Vec3& origin, const Vec3& dir, const std::function<void(std::uint32_t)>& visit) const {
  if (nodes_.empty()) return;
  const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    double tmin = 0.0;
    double tmax = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 3; ++k) {
      double t0 = (node.box.lo[k] - origin[k]) * inv[k];
      double t1 = (node.box.hi[k] - origin[k]) * inv[k];
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
    }
    if (tmin > tmax) continue;
    if (node.leaf) {
      for (std::uint32_t i = node.left; i < node.left + node.right; ++i) visit(prims_[i]);
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
}

// ---------------------------------------------------------------- SurfaceLocator

namespace {

std::vector<Aabb> triangle_boxes(const SurfaceMesh& mesh) {
  std::vector<Aabb> boxes(mesh.triangle_count());
  const auto v = mesh.vertices();
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (auto idx : mesh.triangles()[i]) boxes[i].expand(v[idx]);
  return boxes;
}

// Moller-Trumbore; counts hits with t > 0.
bool ray_hits_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = cross(d, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return false;
  const double inv = 1.0 / det;
  const Vec3 s = o - a;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qv = cross(s, e1);
  const double v = dot(d, qv) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  return dot(e2, qv) * inv > 0.0;
}

}  // namespace

SurfaceLocator::SurfaceLocator(const SurfaceMesh& mesh) : mesh_(&mesh), bvh_(triangle_boxes(mesh)) {}

SurfaceHit SurfaceLocator::closest(const Vec3& q) const {
  const auto v = mesh_->vertices();
  const auto tris = mesh_->triangles();
  double d2 = 0.0;
  const auto tri = bvh_.nearest(
      q,
      [&](std::uint32_t i) {
        const auto& t = tris[i];
        return squared_distance(q, closest_point_on_triangle(q, v[t[0]], v[t[1]], v[t[2]]).point);
      },
      &d2);
  SurfaceHit hit;
  hit.triangle = static_cast<std::uint32_t>(tri);
  const auto& t = tris[hit.triangle];
  hit.closest = closest_point_on_triangle(q, v[t[0]], v[t[1]], v[t[2]]);
  hit.squared_distance = d2;
  return hit;
}

int SurfaceLocator::crossings(const Vec3& origin, const Vec3& dir) const {
  const auto v = mesh_->vertices();
  const auto tris = mesh_->triangles();
  int count = 0;
  bvh_.ray_candidates(origin, dir, [&](std::uint32_t i) {
    const auto& t = tris[i];
    if (ray_hits_triangle(origin, dir, v[t[0]], v[t[1]], v[t[2]])) ++count;
  });
  return count;
}

bool SurfaceLocator::contains(const Vec3& q) const {
  static const Vec3 dirs[3] = {normalized(Vec3{0.5381, 0.6937, 0.4786}), normalized(Vec3{-0.6153, 0.2511, 0.7472}),
                               normalized(Vec3{0.3179, -0.8802, -0.3527})};
  int inside = 0;
  for (const auto& d : dirs) inside += crossings(q, d) % 2;
  return inside >= 2;
}

}  // namespace wsskit
