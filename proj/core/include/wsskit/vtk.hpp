#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsskit/geometry.hpp"
#include "wsskit/mesh.hpp"

namespace wsskit {

/// Named per-vertex point data; `components` is 1 (SCALARS) or 3 (VECTORS).
struct PointField {
  std::string name;
  std::size_t components = 1;
  std::vector<double> data;  // vertex-major
};

PointField scalar_field(std::string name, std::span<const double> values);
PointField vector_field(std::string name, std::span<const Vec3> values);

/// Legacy ASCII POLYDATA with POINTS, POLYGONS and one POINT_DATA block per
/// field in the given order. Values use 9 significant digits. Throws
/// Errc::length_mismatch if a field does not match the vertex count.
void write_vtk(std::ostream& out, const SurfaceMesh& mesh, std::span<const PointField> fields,
               const std::string& title = "wsskit");
void export_vtk(const std::filesystem::path& path, const SurfaceMesh& mesh, std::span<const PointField> fields,
                const std::string& title = "wsskit");

struct VtkPolyData {
  std::vector<Vec3> points;
  std::vector<Triangle> triangles;
  std::vector<PointField> fields;
};

/// Reads the subset written by write_vtk (triangular polygons, SCALARS with
/// a default lookup table, VECTORS). Throws Errc::parse.
VtkPolyData read_vtk(std::istream& in);
VtkPolyData load_vtk(const std::filesystem::path& path);

}  // namespace wsskit
