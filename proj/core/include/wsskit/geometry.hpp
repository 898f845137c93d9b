#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace wsskit {

/// Plain 3-vector used for positions (mm) and directions.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double squared_norm(const Vec3& a) { return dot(a, a); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
constexpr double squared_distance(const Vec3& a, const Vec3& b) { return squared_norm(a - b); }

/// Returns a/|a|, or the zero vector when |a| == 0.
inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec3{};
}

/// Removes the component of v along the unit vector n.
constexpr Vec3 reject(const Vec3& v, const Vec3& n) { return v - dot(v, n) * n; }

/// 3x3 matrix, row-major. Used for stress tensors (N/m^2) and rotations.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }
  constexpr double& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static constexpr Mat3 zero() { return Mat3{}; }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
          a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r(i, j) += a(i, k) * b(k, j);
  return r;
}

constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

constexpr Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
  return r;
}

constexpr Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

/// Rotation about a unit axis by angle (radians), Rodrigues form.
inline Mat3 rotation_matrix(const Vec3& axis, double angle) {
  const Vec3 k = normalized(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  return Mat3{{t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y,
               t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x,
               t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c}};
}

struct Aabb {
  Vec3 lo{HUGE_VAL, HUGE_VAL, HUGE_VAL};
  Vec3 hi{-HUGE_VAL, -HUGE_VAL, -HUGE_VAL};

  void expand(const Vec3& p) {
    lo = {std::fmin(lo.x, p.x), std::fmin(lo.y, p.y), std::fmin(lo.z, p.z)};
    hi = {std::fmax(hi.x, p.x), std::fmax(hi.y, p.y), std::fmax(hi.z, p.z)};
  }
  void expand(const Aabb& b) {
    expand(b.lo);
    expand(b.hi);
  }
  Vec3 center() const { return 0.5 * (lo + hi); }
  Vec3 extent() const { return hi - lo; }
  bool empty() const { return lo.x > hi.x; }

  /// Squared distance from p to the box (0 inside).
  double squared_distance(const Vec3& p) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double v = p[i] < lo[i] ? lo[i] - p[i] : (p[i] > hi[i] ? p[i] - hi[i] : 0.0);
      d += v * v;
    }
    return d;
  }
};

struct ClosestPoint {
  Vec3 point;
  std::array<double, 3> bary{};  // weights of triangle vertices a, b, c
};

/// Closest point on triangle (a, b, c) to p with barycentric weights.
/// Vertex and edge regions return exact weights (e.g. {1, 0, 0}).
ClosestPoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Barycentric coordinates of p with respect to tetrahedron (a, b, c, d).
std::array<double, 4> tet_barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                                      const Vec3& d);

constexpr double triple_product(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(a, cross(b, c));
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

/// Signed volume of tetrahedron (a, b, c, d); positive when d lies on the
/// side of (a, b, c) that the right-hand rule normal points to.
constexpr double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return triple_product(b - a, c - a, d - a) / 6.0;
}

}  // namespace wsskit
