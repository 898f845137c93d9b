#pragma once

#include <span>

#include "wsskit/field_series.hpp"
#include "wsskit/tangent_fields.hpp"

namespace wsskit {

/// Relative tolerance for the stress-tensor symmetry check.
inline constexpr double kSymmetryTolerance = 1e-9;

/// traction = -(T n) per vertex and time. Throws Errc::asymmetric_tensor and
/// Errc::kind_mismatch.
WallFieldSeries traction_from_stress(const WallFieldSeries& stress, std::span<const Vec3> normals);

/// tau_w = t - (t.n) n.
WallFieldSeries wss_vector(const WallFieldSeries& traction, std::span<const Vec3> normals);

/// |tau_w| per vertex and time.
WallFieldSeries wss_amplitude(const WallFieldSeries& wss);

/// t . t_l. Vertices with a degenerate tangent get NaN and a mask bit.
WallFieldSeries wss_longitudinal(const WallFieldSeries& traction, const TangentField& tangents);

/// t . (n x t_l), masked like wss_longitudinal.
WallFieldSeries wss_transversal(const WallFieldSeries& traction, const TangentField& tangents,
                                std::span<const Vec3> normals);

}  // namespace wsskit
