#include "wsskit/vtk.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"

namespace wsskit {

PointField scalar_field(std::string name, std::span<const double> values) {
  return {std::move(name), 1, std::vector<double>(values.begin(), values.end())};
}

PointField vector_field(std::string name, std::span<const Vec3> values) {
  PointField f{std::move(name), 3, {}};
  f.data.reserve(3 * values.size());
  for (const auto& v : values) f.data.insert(f.data.end(), {v.x, v.y, v.z});
  return f;
}

void write_vtk(std::ostream& out, const SurfaceMesh& mesh, std::span<const PointField> fields,
               const std::string& title) {
  const std::size_t nv = mesh.vertex_count();
  for (const auto& f : fields) {
    if (f.components != 1 && f.components != 3)
      fail(Errc::bad_argument, "field '" + f.name + "' must have 1 or 3 components");
    if (f.data.size() != f.components * nv)
      fail(Errc::length_mismatch, "field '" + f.name + "' has " + std::to_string(f.data.size() / f.components) +
                                      " values for " + std::to_string(nv) + " vertices");
    if (f.name.empty() || f.name.find_first_of(" \t\n") != std::string::npos)
      fail(Errc::bad_argument, "VTK field names must be non-empty and contain no whitespace");
  }
  auto num = [](double v) { return format_significant(v, 9); };

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices()) out << num(p.x) << ' ' << num(p.y) << ' ' << num(p.z) << '\n';
  const auto tris = mesh.triangles();
  out << "POLYGONS " << tris.size() << ' ' << 4 * tris.size() << '\n';
  for (const auto& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (fields.empty()) return;
  out << "POINT_DATA " << nv << '\n';
  for (const auto& f : fields) {
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.data) out << num(v) << '\n';
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (std::size_t i = 0; i < nv; ++i)
        out << num(f.data[3 * i]) << ' ' << num(f.data[3 * i + 1]) << ' ' << num(f.data[3 * i + 2]) << '\n';
    }
  }
}

void export_vtk(const std::filesystem::path& path, const SurfaceMesh& mesh, std::span<const PointField> fields,
                const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  write_vtk(out, mesh, fields, title);
  if (!out) fail(Errc::io, "write failed for " + path.string());
}

namespace {

std::string next_token(std::istream& in, const char* what) {
  std::string t;
  if (!(in >> t)) fail(Errc::parse, std::string("VTK: unexpected end of file reading ") + what);
  return t;
}

void expect(std::istream& in, const std::string& keyword) {
  const auto t = next_token(in, keyword.c_str());
  if (t != keyword) fail(Errc::parse, "VTK: expected '" + keyword + "' but found '" + t + "'");
}

std::size_t count(std::istream& in, const char* what) {
  const auto v = parse_integer(next_token(in, what), what);
  if (v < 0) fail(Errc::parse, std::string("VTK: negative ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

VtkPolyData read_vtk(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) fail(Errc::parse, "VTK: missing header");
  std::getline(in, line);  // title
  expect(in, "ASCII");
  expect(in, "DATASET");
  expect(in, "POLYDATA");

  VtkPolyData data;
  expect(in, "POINTS");
  data.points.resize(count(in, "point count"));
  next_token(in, "point type");
  for (auto& p : data.points)
    for (std::size_t k = 0; k < 3; ++k) p[k] = parse_double(next_token(in, "coordinate"), "coordinate");

  std::string keyword;
  if (!(in >> keyword)) return data;
  if (keyword == "POLYGONS") {
    data.triangles.resize(count(in, "polygon count"));
    count(in, "polygon list size");
    for (auto& t : data.triangles) {
      if (count(in, "polygon arity") != 3) fail(Errc::parse, "VTK: only triangles are supported");
      for (std::size_t k = 0; k < 3; ++k) {
        const auto idx = count(in, "polygon index");
        if (idx >= data.points.size()) fail(Errc::parse, "VTK: polygon index out of range");
        t[k] = static_cast<std::uint32_t>(idx);
      }
    }
    if (!(in >> keyword)) return data;
  }
  if (keyword != "POINT_DATA") fail(Errc::parse, "VTK: unsupported section '" + keyword + "'");
  if (count(in, "point data count") != data.points.size()) fail(Errc::parse, "VTK: POINT_DATA count mismatch");
  while (in >> keyword) {
    PointField f;
    if (keyword == "SCALARS") {
      f.name = next_token(in, "field name");
      next_token(in, "field type");
      // Optional component count before LOOKUP_TABLE.
      auto t = next_token(in, "LOOKUP_TABLE");
      if (t != "LOOKUP_TABLE") {
        if (parse_integer(t, "component count") != 1) fail(Errc::parse, "VTK: multi-component SCALARS unsupported");
        t = next_token(in, "LOOKUP_TABLE");
      }
      if (t != "LOOKUP_TABLE") fail(Errc::parse, "VTK: expected LOOKUP_TABLE");
      next_token(in, "lookup table name");
      f.components = 1;
    } else if (keyword == "VECTORS") {
      f.name = next_token(in, "field name");
      next_token(in, "field type");
      f.components = 3;
    } else {
      fail(Errc::parse, "VTK: unsupported point data '" + keyword + "'");
    }
    f.data.resize(f.components * data.points.size());
    for (auto& v : f.data) v = parse_double(next_token(in, "field value"), "field value");
    data.fields.push_back(std::move(f));
  }
  return data;
}

VtkPolyData load_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  return read_vtk(in);
}

}  // namespace wsskit
