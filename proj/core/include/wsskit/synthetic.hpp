#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsskit/field_series.hpp"
#include "wsskit/mesh.hpp"

namespace wsskit {

enum class CapStyle {
  none,  // open tube
  flat,  // fan to a center vertex
  dome,  // hemispherical caps; end centers then have clearance R
};

/// Straight tube of radius R (mm) along +z from z = 0 to z = L. Lateral
/// vertices come first, angle-major: index j * n_z + k sits at angle
/// 2*pi*j/n_theta and height L*k/(n_z-1). Each quad is split along the
/// (j+1,k)-(j,k+1) diagonal except the seam quads (j = n_theta-1), which
/// use (j,k)-(0,k+1); every lowest-index neighbour edge is then axial or
/// circumferential. Throws Errc::bad_resolution for n_theta < 8,
/// n_z < 2 or non-positive sizes.
SurfaceMesh make_cylinder_mesh(double R, double L, std::size_t n_theta, std::size_t n_z, CapStyle caps = CapStyle::none);

inline std::size_t cylinder_lateral_count(std::size_t n_theta, std::size_t n_z) { return n_theta * n_z; }

/// 4*mu*Q/(pi*R^3) in N/m^2 for mu in Pa*s, Q in ml/s and R in mm.
double poiseuille_wall_shear(double Q_ml_s, double mu, double R_mm);

struct PoiseuilleParams {
  Vec3 axis_origin{0, 0, 0};
  Vec3 axis{0, 0, 1};       // flow direction
  double Q = 7.9;           // ml/s
  double mu = 0.00345;      // Pa*s
  double R = 3.0;           // mm
  double pressure = 100.0;  // N/m^2, constant normal part of the traction
};

/// Steady traction exerted by the fluid on the wall of a straight tube:
/// tangential part tau * axis with tau = poiseuille_wall_shear(Q, mu, R),
/// plus pressure * n. Throws Errc::geometry_mismatch when a vertex lies
/// more than 1% off radius R.
WallFieldSeries poiseuille_traction(const SurfaceMesh& mesh, const PoiseuilleParams& params, std::vector<double> times);

/// The matching fluid Cauchy stress T = -p I - tau (a r^T + r a^T), with r
/// the radial unit vector and a the axis; -T n reproduces the traction.
WallFieldSeries poiseuille_stress(const SurfaceMesh& mesh, const PoiseuilleParams& params, std::vector<double> times);

/// Flow waveform samples (t, q); q is linearly interpolated in t.
using Waveform = std::vector<std::pair<double, double>>;

/// Reads "t,q" rows (header and '#' comments allowed).
Waveform load_waveform(const std::string& path);

/// Scales the tangential part of each traction sample at time t by
/// q(t) / q_ref and keeps the normal part. Throws Errc::window_out_of_range
/// when the waveform does not cover the series times.
WallFieldSeries pulsatile_scale(const WallFieldSeries& traction, std::span<const Vec3> normals, const Waveform& waveform,
                                double q_ref);

struct YJunctionParams {
  double trunk_R = 3.0;
  double branch_R1 = 2.0;
  double branch_R2 = 2.0;
  double angle_deg = 60.0;     // full opening angle between the branches
  double trunk_length = 20.0;  // mm, segment from the junction down -z
  double branch_length = 20.0;
  double cell = 0.5;           // sampling grid spacing (mm)
  double blend = 1.0;          // smooth-union radius (mm)
};

/// Watertight Y-shaped tube: union of three capsules (trunk along -z, the
/// branches in the xz-plane at +/- angle/2 from +z) blended at the junction
/// and polygonized by marching tetrahedra on a grid symmetric about x = 0.
/// Throws Errc::bad_resolution for non-positive sizes and
/// Errc::self_intersection when the branches overlap past the junction.
SurfaceMesh make_y_junction_mesh(const YJunctionParams& params);

/// End centers of the Y-junction capsules: trunk, branch 1 (+x), branch 2 (-x).
std::array<Vec3, 3> y_junction_ends(const YJunctionParams& params);

/// Regular tetrahedron with edge a, and an n^3-cell box [0,s]^3 split into
/// six tets per cell (for mesh-size and volume-measure tests).
TetMesh make_regular_tetrahedron(double a);
TetMesh make_box_tet_mesh(double s, std::size_t n);

/// Icosphere of radius r centered at the origin.
SurfaceMesh make_sphere_mesh(double r, std::size_t subdivisions);

/// Synthetic validation case: mesh, traction series and the per-vertex
/// closed-form expectations.
struct SyntheticCase {
  std::string name;
  SurfaceMesh mesh;
  WallFieldSeries traction;
  std::vector<double> wss_amplitude;
  std::vector<double> wss_longitudinal;
  std::vector<double> osi;
  std::vector<double> osi_longitudinal;
  double tolerance = 0.0;
};

/// Steady Poiseuille flow on an open cylinder (oracles: amplitude and
/// longitudinal WSS = tau, OSI = OSI_L = 0).
SyntheticCase poiseuille_case(const PoiseuilleParams& params, double L, std::size_t n_theta, std::size_t n_z,
                              std::vector<double> times);

/// Poiseuille traction modulated by a two-level waveform: q_hi over the
/// first half of [t0, t1], q_lo over the second half, with the sign change
/// placed on a sample instant. OSI_L oracle from exact piecewise integration.
SyntheticCase square_wave_case(const PoiseuilleParams& params, double L, std::size_t n_theta, std::size_t n_z,
                               double q_hi, double q_lo, double t0, double t1, std::size_t samples);

}  // namespace wsskit
