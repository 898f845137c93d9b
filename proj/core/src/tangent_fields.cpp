#include "wsskit/tangent_fields.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"
#include "wsskit/parallel.hpp"

namespace wsskit {

std::string_view tangent_method_name(TangentMethod m) {
  switch (m) {
    case TangentMethod::automatic_t1: return "automatic_t1";
    case TangentMethod::automatic_t2: return "automatic_t2";
    case TangentMethod::flipped: return "flipped";
    case TangentMethod::projected: return "projected";
  }
  return "automatic_t1";
}

std::size_t TangentField::degenerate_count() const {
  std::size_t n = 0;
  for (auto d : degenerate) n += d != 0;
  return n;
}

std::pair<TangentField, TangentField> automatic_tangent_basis(const SurfaceMesh& mesh) {
  const auto v = mesh.vertices();
  const auto n = mesh.normals();
  TangentField t1{std::vector<Vec3>(v.size()), TangentMethod::automatic_t1, std::vector<std::uint8_t>(v.size(), 0), {}};
  TangentField t2{std::vector<Vec3>(v.size()), TangentMethod::automatic_t2, std::vector<std::uint8_t>(v.size(), 0), {}};
  for (std::uint32_t i = 0; i < v.size(); ++i)
    if (mesh.neighbors(i).empty()) fail(Errc::degenerate_vertex, "vertex " + std::to_string(i) + " is isolated");
  parallel_for(v.size(), [&](std::size_t i) {
    const auto nb = mesh.neighbors(static_cast<std::uint32_t>(i));
    const Vec3 e = v[nb.front()] - v[i];
    const Vec3 a = normalized(reject(e, n[i]));
    if (norm(a) == 0.0) {
      t1.degenerate[i] = t2.degenerate[i] = 1;
      return;
    }
    t1.vectors[i] = a;
    t2.vectors[i] = cross(n[i], a);
  });
  return {std::move(t1), std::move(t2)};
}

TangentField flip_tangents(const TangentField& t2, std::span<const int> labels, std::span<const FlowRegion> regions,
                           double tolerance) {
  if (!labels.empty() && labels.size() != t2.size())
    fail(Errc::length_mismatch, "region labels cover " + std::to_string(labels.size()) + " of " +
                                    std::to_string(t2.size()) + " vertices");
  std::map<int, Vec3> flow;
  for (const auto& r : regions) flow[r.label] = normalized(r.v);
  std::vector<Vec3> v_of(t2.size());
  for (std::size_t i = 0; i < t2.size(); ++i) {
    const int label = labels.empty() ? 0 : labels[i];
    const auto it = flow.find(label);
    if (it == flow.end())
      fail(Errc::missing_region, "vertex " + std::to_string(i) + " has region " + std::to_string(label) +
                                     " without a flow vector");
    v_of[i] = it->second;
  }
  TangentField out{std::vector<Vec3>(t2.size()), TangentMethod::flipped, std::vector<std::uint8_t>(t2.size(), 0),
                   std::vector<int>(labels.begin(), labels.end())};
  parallel_for(t2.size(), [&](std::size_t i) {
    const double s = dot(t2.vectors[i], v_of[i]);
    const bool zero = std::abs(s) < tolerance;
    out.vectors[i] = s < 0.0 && !zero ? -t2.vectors[i] : t2.vectors[i];
    out.degenerate[i] = zero || (!t2.degenerate.empty() && t2.degenerate[i]);
  });
  return out;
}

TangentField project_centerline_tangents(const SurfaceMesh& mesh, const Centerline& cl,
                                         const ProjectionOptions& options) {
  if (cl.branches.empty()) fail(Errc::bad_argument, "centerline has no branches");
  if (options.neighbors == 0) fail(Errc::bad_argument, "projection needs at least one neighbour");
  const CenterlineLocator locator(cl);
  const auto v = mesh.vertices();
  const auto n = mesh.normals();
  TangentField out{std::vector<Vec3>(v.size()), TangentMethod::projected, std::vector<std::uint8_t>(v.size(), 0),
                   std::vector<int>(v.size(), 0)};
  parallel_for(v.size(), [&](std::size_t i) {
    Vec3 c;
    if (options.neighbors == 1) {
      const auto hit = locator.nearest(v[i]);
      c = locator.tangent(hit);
      out.regions[i] = locator.section(hit);
    } else {
      const auto hits = locator.k_nearest(v[i], options.neighbors);
      out.regions[i] = locator.section(hits.front());
      if (hits.front().distance == 0.0) {
        c = locator.tangent(hits.front());
      } else {
        for (const auto& h : hits) c += locator.tangent(h) / h.distance;
      }
    }
    const Vec3 p = reject(c, n[i]);
    const double len = norm(p);
    if (len < options.tolerance) {
      out.degenerate[i] = 1;
      out.vectors[i] = c;
      return;
    }
    out.vectors[i] = p / len;
  });
  return out;
}

std::vector<FlowRegion> section_flow_vectors(const Centerline& cl) {
  std::map<int, std::pair<Vec3, Vec3>> span;  // first and last point per section
  for (std::size_t b = 0; b < cl.branches.size(); ++b)
    for (std::size_t k = 0; k < cl.branches[b].points.size(); ++k) {
      const int s = cl.sections[b][k];
      auto [it, inserted] = span.try_emplace(s, cl.branches[b].points[k], cl.branches[b].points[k]);
      if (!inserted) it->second.second = cl.branches[b].points[k];
    }
  std::vector<FlowRegion> out;
  for (const auto& [label, ends] : span) {
    Vec3 dir = normalized(ends.second - ends.first);
    if (norm(dir) == 0.0) {
      // Single-point section: fall back to the tangent there.
      for (std::size_t b = 0; b < cl.branches.size() && norm(dir) == 0.0; ++b)
        for (std::size_t k = 0; k < cl.branches[b].points.size(); ++k)
          if (cl.sections[b][k] == label) {
            dir = cl.branches[b].tangents[k];
            break;
          }
    }
    out.push_back({label, dir});
  }
  return out;
}

double mean_misalignment(const SurfaceMesh& mesh, const TangentField& field) {
  if (field.size() != mesh.vertex_count()) fail(Errc::length_mismatch, "tangent field does not match the mesh");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& e : mesh.edges()) {
    if (!field.degenerate.empty() && (field.degenerate[e[0]] || field.degenerate[e[1]])) continue;
    sum += 1.0 - dot(field.vectors[e[0]], field.vectors[e[1]]);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

void write_tangents_csv(std::ostream& out, const TangentField& field) {
  out << "vertex_id,tx,ty,tz,method,degenerate\n";
  const auto method = tangent_method_name(field.method);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto& t = field.vectors[i];
    out << i << ',' << format_roundtrip(t.x) << ',' << format_roundtrip(t.y) << ',' << format_roundtrip(t.z) << ','
        << method << ',' << (field.degenerate.empty() ? 0 : int(field.degenerate[i])) << '\n';
  }
}

void save_tangents(const std::filesystem::path& path, const TangentField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  write_tangents_csv(out, field);
}

TangentField load_tangents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open tangent field " + path.string());
  TangentField field;
  bool have_method = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#' || text.rfind("vertex_id", 0) == 0) continue;
    const auto f = split(text, ',');
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (f.size() != 6) fail(Errc::parse, where + ": expected 6 columns");
    if (parse_integer(f[0], "vertex_id") != static_cast<long long>(field.size()))
      fail(Errc::parse, where + ": vertex ids must be 0..n-1 in order");
    field.vectors.push_back({parse_double(f[1], "tx"), parse_double(f[2], "ty"), parse_double(f[3], "tz")});
    const auto m = std::string(trim(f[4]));
    TangentMethod method;
    if (m == "automatic_t1")
      method = TangentMethod::automatic_t1;
    else if (m == "automatic_t2")
      method = TangentMethod::automatic_t2;
    else if (m == "flipped")
      method = TangentMethod::flipped;
    else if (m == "projected")
      method = TangentMethod::projected;
    else
      fail(Errc::parse, where + ": unknown method '" + m + "'");
    if (have_method && method != field.method) fail(Errc::parse, where + ": mixed methods in one field");
    field.method = method;
    have_method = true;
    field.degenerate.push_back(parse_integer(f[5], "degenerate") != 0);
  }
  return field;
}

}  // namespace wsskit
