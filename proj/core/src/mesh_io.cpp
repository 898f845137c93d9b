#include "wsskit/mesh_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"

namespace wsskit {
namespace {

// Whitespace tokenizer that skips '#' comments, tracking line numbers for
// error messages.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    while (true) {
      if (pos_ < tokens_.size()) {
        token = tokens_[pos_++];
        return true;
      }
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++line_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      tokens_.clear();
      pos_ = 0;
      std::istringstream ls(line);
      for (std::string t; ls >> t;) tokens_.push_back(t);
    }
  }

  std::string expect(const char* what) {
    std::string t;
    if (!next(t)) fail(Errc::parse, std::string("unexpected end of file while reading ") + what);
    return t;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::uint32_t checked_index(long long idx, std::size_t nv, std::size_t face) {
  if (idx < 0 || static_cast<std::size_t>(idx) >= nv)
    fail(Errc::parse, "face " + std::to_string(face) + " references vertex " + std::to_string(idx) + " but mesh has " +
                          std::to_string(nv) + " vertices");
  return static_cast<std::uint32_t>(idx);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  return out;
}

}  // namespace

SurfaceMesh read_off(std::istream& in, MeshOptions options) {
  Tokens tok(in);
  std::string header = tok.expect("OFF header");
  std::string count_token;
  if (header == "OFF") {
    count_token = tok.expect("vertex count");
  } else if (header.rfind("OFF", 0) == 0 && header.size() > 3) {
    count_token = header.substr(3);  // "OFF8 12 0" style
  } else {
    fail(Errc::parse, "missing OFF header");
  }
  const auto nv = parse_integer(count_token, "vertex count");
  const auto nf = parse_integer(tok.expect("face count"), "face count");
  parse_integer(tok.expect("edge count"), "edge count");
  if (nv < 0 || nf < 0) fail(Errc::parse, "negative element count in OFF header");

  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices)
    for (std::size_t k = 0; k < 3; ++k) p[k] = parse_double(tok.expect("vertex coordinate"), "vertex coordinate");

  std::vector<Triangle> triangles(static_cast<std::size_t>(nf));
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const auto arity = parse_integer(tok.expect("face arity"), "face arity");
    if (arity != 3) fail(Errc::parse, "face " + std::to_string(f) + " has " + std::to_string(arity) + " vertices; only triangles are supported");
    for (std::size_t k = 0; k < 3; ++k)
      triangles[f][k] = checked_index(parse_integer(tok.expect("face index"), "face index"), vertices.size(), f);
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles), options);
}

SurfaceMesh read_obj(std::istream& in, MeshOptions options) {
  std::vector<Vec3> vertices;
  std::vector<std::array<long long, 3>> raw_faces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      std::string c;
      for (std::size_t k = 0; k < 3; ++k) {
        if (!(ls >> c)) fail(Errc::parse, "line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
        p[k] = parse_double(c, "vertex coordinate");
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<long long> idx;
      for (std::string c; ls >> c;) {
        const auto slash = c.find('/');
        long long i = parse_integer(std::string_view(c).substr(0, slash), "face index");
        // OBJ indices are 1-based; negatives count back from the last vertex.
        i = i < 0 ? static_cast<long long>(vertices.size()) + i : i - 1;
        idx.push_back(i);
      }
      if (idx.size() != 3)
        fail(Errc::parse, "line " + std::to_string(line_no) + ": face has " + std::to_string(idx.size()) +
                              " vertices; only triangles are supported");
      raw_faces.push_back({idx[0], idx[1], idx[2]});
    }
    // vn, vt, g, o, s, usemtl, mtllib: ignored
  }
  std::vector<Triangle> triangles(raw_faces.size());
  for (std::size_t f = 0; f < raw_faces.size(); ++f)
    for (std::size_t k = 0; k < 3; ++k) triangles[f][k] = checked_index(raw_faces[f][k], vertices.size(), f);
  return SurfaceMesh(std::move(vertices), std::move(triangles), options);
}

SurfaceMesh load_surface_mesh(const std::filesystem::path& path, MeshFormat format, MeshOptions options) {
  if (format == MeshFormat::from_extension) {
    auto ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ext == ".off")
      format = MeshFormat::off;
    else if (ext == ".obj")
      format = MeshFormat::obj;
    else
      fail(Errc::parse, "unknown mesh extension '" + ext + "' (expected .off or .obj)");
  }
  auto in = open_input(path);
  return format == MeshFormat::off ? read_off(in, options) : read_obj(in, options);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  for (const auto& p : mesh.vertices())
    out << format_roundtrip(p.x) << ' ' << format_roundtrip(p.y) << ' ' << format_roundtrip(p.z) << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void save_off(const std::filesystem::path& path, const SurfaceMesh& mesh) {
  auto out = open_output(path);
  write_off(out, mesh);
}

TetMesh read_tet(std::istream& in) {
  Tokens tok(in);
  if (tok.expect("TET header") != "TET") fail(Errc::parse, "missing TET header");
  const auto nv = parse_integer(tok.expect("vertex count"), "vertex count");
  const auto nt = parse_integer(tok.expect("tet count"), "tet count");
  if (nv < 0 || nt < 0) fail(Errc::parse, "negative element count in TET header");
  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices)
    for (std::size_t k = 0; k < 3; ++k) p[k] = parse_double(tok.expect("vertex coordinate"), "vertex coordinate");
  std::vector<Tetrahedron> tets(static_cast<std::size_t>(nt));
  for (std::size_t t = 0; t < tets.size(); ++t)
    for (std::size_t k = 0; k < 4; ++k)
      tets[t][k] = checked_index(parse_integer(tok.expect("tet index"), "tet index"), vertices.size(), t);
  return TetMesh(std::move(vertices), std::move(tets));
}

TetMesh load_tet_mesh(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_tet(in);
}

void write_tet(std::ostream& out, const TetMesh& mesh) {
  out << "TET\n" << mesh.vertex_count() << ' ' << mesh.tet_count() << '\n';
  for (const auto& p : mesh.vertices())
    out << format_roundtrip(p.x) << ' ' << format_roundtrip(p.y) << ' ' << format_roundtrip(p.z) << '\n';
  for (const auto& t : mesh.tets()) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

void save_tet_mesh(const std::filesystem::path& path, const TetMesh& mesh) {
  auto out = open_output(path);
  write_tet(out, mesh);
}

}  // namespace wsskit
