#pragma once

#include <filesystem>
#include <iosfwd>

#include "wsskit/mesh.hpp"

namespace wsskit {

enum class MeshFormat { off, obj, from_extension };

/// Reads an ASCII OFF or OBJ triangle mesh. OBJ normals, texture coordinates
/// and groups are ignored; non-triangular faces are rejected. Throws
/// Errc::parse for malformed files and Errc::topology for non-manifold input.
SurfaceMesh load_surface_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::from_extension,
                              MeshOptions options = {});
SurfaceMesh read_off(std::istream& in, MeshOptions options = {});
SurfaceMesh read_obj(std::istream& in, MeshOptions options = {});

/// OFF writer; coordinates use round-trip formatting so save -> load is exact.
void write_off(std::ostream& out, const SurfaceMesh& mesh);
void save_off(const std::filesystem::path& path, const SurfaceMesh& mesh);

/// Plain-text tet mesh:
///   TET
///   <n_vertices> <n_tets>
///   x y z            (n_vertices lines)
///   a b c d          (n_tets lines, 0-based)
TetMesh read_tet(std::istream& in);
TetMesh load_tet_mesh(const std::filesystem::path& path);
void write_tet(std::ostream& out, const TetMesh& mesh);
void save_tet_mesh(const std::filesystem::path& path, const TetMesh& mesh);

}  // namespace wsskit
