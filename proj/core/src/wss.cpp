#include "wsskit/wss.hpp"

#include <cmath>
#include <limits>

#include "wsskit/error.hpp"
#include "wsskit/parallel.hpp"

namespace wsskit {
namespace {

void require_kind(const WallFieldSeries& s, FieldKind kind, const char* op) {
  if (s.kind() != kind)
    fail(Errc::kind_mismatch, std::string(op) + " expects a " + std::string(field_kind_name(kind)) + " series, got " +
                                  std::string(field_kind_name(s.kind())));
}

void require_size(std::size_t have, std::size_t want, const char* what) {
  if (have != want)
    fail(Errc::length_mismatch, std::string(what) + " has " + std::to_string(have) + " entries for " +
                                    std::to_string(want) + " vertices");
}

std::vector<double> times_of(const WallFieldSeries& s) { return {s.times().begin(), s.times().end()}; }

std::vector<std::uint8_t> merge_masks(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::size_t n) {
  if (a.empty() && b.empty()) return {};
  std::vector<std::uint8_t> m(n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i] = (!a.empty() && a[i]) || (!b.empty() && b[i]);
  return m;
}

// Builds a series of the given kind from a per-(time, vertex) map writing
// `components` values.
template <typename Fn>
WallFieldSeries map_series(const WallFieldSeries& in, FieldKind kind, Fn&& fn) {
  const std::size_t nc = component_count(kind);
  std::vector<std::vector<double>> samples(in.time_count(), std::vector<double>(nc * in.vertex_count()));
  for (std::size_t t = 0; t < in.time_count(); ++t) {
    double* out = samples[t].data();
    parallel_for(in.vertex_count(), [&](std::size_t v) { fn(t, v, out + nc * v); });
  }
  WallFieldSeries s(kind, in.vertex_count(), times_of(in), std::move(samples));
  s.set_window(in.window());
  return s;
}

}  // namespace

WallFieldSeries traction_from_stress(const WallFieldSeries& stress, std::span<const Vec3> normals) {
  require_kind(stress, FieldKind::stress_tensor, "traction_from_stress");
  require_size(normals.size(), stress.vertex_count(), "normal list");
  for (std::size_t t = 0; t < stress.time_count(); ++t)
    for (std::size_t v = 0; v < stress.vertex_count(); ++v) {
      const Mat3 T = stress.tensor(t, v);
      double scale = 0.0;
      for (double x : T.m) scale = std::max(scale, std::abs(x));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
          if (std::abs(T(i, j) - T(j, i)) > kSymmetryTolerance * scale)
            fail(Errc::asymmetric_tensor, "stress tensor at vertex " + std::to_string(v) + ", time index " +
                                              std::to_string(t) + " is not symmetric");
    }
  auto out = map_series(stress, FieldKind::traction_vector, [&](std::size_t t, std::size_t v, double* o) {
    const Vec3 tr = -(stress.tensor(t, v) * normals[v]);
    o[0] = tr.x;
    o[1] = tr.y;
    o[2] = tr.z;
  });
  out.set_mask(std::vector<std::uint8_t>(stress.mask().begin(), stress.mask().end()));
  return out;
}

WallFieldSeries wss_vector(const WallFieldSeries& traction, std::span<const Vec3> normals) {
  require_kind(traction, FieldKind::traction_vector, "wss_vector");
  require_size(normals.size(), traction.vertex_count(), "normal list");
  auto out = map_series(traction, FieldKind::traction_vector, [&](std::size_t t, std::size_t v, double* o) {
    const Vec3 tau = reject(traction.vector(t, v), normals[v]);
    o[0] = tau.x;
    o[1] = tau.y;
    o[2] = tau.z;
  });
  out.set_mask(std::vector<std::uint8_t>(traction.mask().begin(), traction.mask().end()));
  return out;
}

WallFieldSeries wss_amplitude(const WallFieldSeries& wss) {
  require_kind(wss, FieldKind::traction_vector, "wss_amplitude");
  auto out = map_series(wss, FieldKind::scalar,
                        [&](std::size_t t, std::size_t v, double* o) { o[0] = norm(wss.vector(t, v)); });
  out.set_mask(std::vector<std::uint8_t>(wss.mask().begin(), wss.mask().end()));
  return out;
}

WallFieldSeries wss_longitudinal(const WallFieldSeries& traction, const TangentField& tangents) {
  require_kind(traction, FieldKind::traction_vector, "wss_longitudinal");
  require_size(tangents.size(), traction.vertex_count(), "tangent field");
  const auto mask = merge_masks(traction.mask(), tangents.degenerate, traction.vertex_count());
  auto out = map_series(traction, FieldKind::scalar, [&](std::size_t t, std::size_t v, double* o) {
    o[0] = !mask.empty() && mask[v] ? std::numeric_limits<double>::quiet_NaN()
                                    : dot(traction.vector(t, v), tangents.vectors[v]);
  });
  out.set_mask(mask);
  return out;
}

WallFieldSeries wss_transversal(const WallFieldSeries& traction, const TangentField& tangents,
                                std::span<const Vec3> normals) {
  require_kind(traction, FieldKind::traction_vector, "wss_transversal");
  require_size(tangents.size(), traction.vertex_count(), "tangent field");
  require_size(normals.size(), traction.vertex_count(), "normal list");
  const auto mask = merge_masks(traction.mask(), tangents.degenerate, traction.vertex_count());
  auto out = map_series(traction, FieldKind::scalar, [&](std::size_t t, std::size_t v, double* o) {
    o[0] = !mask.empty() && mask[v] ? std::numeric_limits<double>::quiet_NaN()
                                    : dot(traction.vector(t, v), cross(normals[v], tangents.vectors[v]));
  });
  out.set_mask(mask);
  return out;
}

}  // namespace wsskit
