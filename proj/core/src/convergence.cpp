#include "wsskit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"
#include "wsskit/parallel.hpp"
#include "wsskit/spatial.hpp"

namespace wsskit {
namespace {

void check_field(std::size_t have, std::size_t want, const char* what) {
  if (have != want)
    fail(Errc::dimension_mismatch, std::string(what) + " has " + std::to_string(have) + " values for " +
                                       std::to_string(want) + " vertices");
}

[[noreturn]] void out_of_domain(std::size_t v, double d, double tol) {
  fail(Errc::out_of_domain, "fine vertex " + std::to_string(v) + " lies " + format_roundtrip(d) +
                                " mm from the coarse mesh (tolerance " + format_roundtrip(tol) + ")");
}

double lumped_error(std::span<const double> f, std::span<const double> ref, const std::vector<double>& w) {
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) scale = std::max(scale, std::abs(f[i] - ref[i]));
  if (scale == 0.0) return 0.0;
  // Scaled by the largest difference; a constant difference then cancels exactly.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = (f[i] - ref[i]) / scale;
    num += w[i] * d * d;
    den += w[i];
  }
  return scale * std::sqrt(num / den);
}

}  // namespace

std::vector<double> project_field(const SurfaceMesh& coarse, std::span<const double> field, const SurfaceMesh& fine) {
  check_field(field.size(), coarse.vertex_count(), "coarse field");
  const double tol = 0.5 * mean_mesh_size(coarse);
  const SurfaceLocator locator(coarse);
  const auto tris = coarse.triangles();
  const auto fv = fine.vertices();
  std::vector<double> out(fv.size());
  std::vector<double> miss(fv.size(), -1.0);
  parallel_for(fv.size(), [&](std::size_t v) {
    const auto hit = locator.closest(fv[v]);
    const double d = std::sqrt(hit.squared_distance);
    if (d > tol) {
      miss[v] = d;
      return;
    }
    const auto& t = tris[hit.triangle];
    const auto& b = hit.closest.bary;
    out[v] = b[0] * field[t[0]] + b[1] * field[t[1]] + b[2] * field[t[2]];
  });
  for (std::size_t v = 0; v < miss.size(); ++v)
    if (miss[v] >= 0.0) out_of_domain(v, miss[v], tol);
  return out;
}

std::vector<double> project_field(const TetMesh& coarse, std::span<const double> field, const TetMesh& fine) {
  check_field(field.size(), coarse.vertex_count(), "coarse field");
  const double tol = 0.5 * mean_mesh_size(coarse);
  const auto cv = coarse.vertices();
  const auto tets = coarse.tets();
  std::vector<Aabb> boxes(tets.size());
  for (std::size_t t = 0; t < tets.size(); ++t)
    for (auto i : tets[t]) boxes[t].expand(cv[i]);
  const Bvh bvh(std::move(boxes));

  // Closest point on tet t to q, as barycentric weights of its vertices.
  auto closest = [&](std::uint32_t t, const Vec3& q, std::array<double, 4>& w) {
    const auto& tet = tets[t];
    w = tet_barycentric(q, cv[tet[0]], cv[tet[1]], cv[tet[2]], cv[tet[3]]);
    if (w[0] >= 0.0 && w[1] >= 0.0 && w[2] >= 0.0 && w[3] >= 0.0) return 0.0;
    static constexpr int kFace[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < 4; ++f) {
      const auto cp = closest_point_on_triangle(q, cv[tet[kFace[f][0]]], cv[tet[kFace[f][1]]], cv[tet[kFace[f][2]]]);
      const double d2 = squared_distance(q, cp.point);
      if (d2 < best) {
        best = d2;
        w = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < 3; ++k) w[kFace[f][k]] = cp.bary[k];
      }
    }
    return best;
  };

  const auto fv = fine.vertices();
  std::vector<double> out(fv.size());
  std::vector<double> miss(fv.size(), -1.0);
  parallel_for(fv.size(), [&](std::size_t v) {
    std::array<double, 4> w{};
    double d2 = 0.0;
    const auto t = bvh.nearest(fv[v], [&](std::uint32_t i) { return closest(i, fv[v], w); }, &d2);
    if (t < 0 || std::sqrt(d2) > tol) {
      miss[v] = std::sqrt(d2);
      return;
    }
    closest(static_cast<std::uint32_t>(t), fv[v], w);
    const auto& tet = tets[static_cast<std::size_t>(t)];
    // Clamp round-off negatives so the result stays a convex combination.
    double sum = 0.0;
    for (auto& x : w) sum += (x = std::max(x, 0.0));
    double value = 0.0;
    for (std::size_t k = 0; k < 4; ++k) value += w[k] / sum * field[tet[k]];
    out[v] = value;
  });
  for (std::size_t v = 0; v < miss.size(); ++v)
    if (miss[v] >= 0.0) out_of_domain(v, miss[v], tol);
  return out;
}

double weighted_l2_error(std::span<const double> field, std::span<const double> reference, const SurfaceMesh& mesh) {
  check_field(field.size(), mesh.vertex_count(), "field");
  check_field(reference.size(), mesh.vertex_count(), "reference field");
  return lumped_error(field, reference, lumped_vertex_areas(mesh));
}

double weighted_l2_error(std::span<const double> field, std::span<const double> reference, const TetMesh& mesh) {
  check_field(field.size(), mesh.vertex_count(), "field");
  check_field(reference.size(), mesh.vertex_count(), "reference field");
  return lumped_error(field, reference, lumped_vertex_volumes(mesh));
}

std::vector<double> eoc(std::span<const double> errors, std::span<const double> h) {
  if (errors.size() != h.size())
    fail(Errc::dimension_mismatch, std::to_string(errors.size()) + " errors but " + std::to_string(h.size()) +
                                       " mesh sizes");
  if (errors.size() < 2) fail(Errc::dimension_mismatch, "EOC needs at least two meshes");
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!(errors[i] > 0.0) || !(h[i] > 0.0))
      fail(Errc::non_positive_input, "errors and mesh sizes must be positive (row " + std::to_string(i + 1) + ")");
  std::vector<double> out(errors.size() - 1);
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    out[i] = std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]);
  return out;
}

void compute_eoc_columns(ConvergenceReport& report, double vanishing) {
  auto& rows = report.rows;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    if (!(a.h > 0.0) || !(b.h > 0.0)) fail(Errc::non_positive_input, "mesh sizes must be positive");
    auto rate = [&](double ea, double eb) -> std::optional<double> {
      if (!(ea > vanishing) || !(eb > vanishing)) return std::nullopt;
      const double e[2] = {ea, eb};
      const double h[2] = {a.h, b.h};
      return eoc(e, h)[0];
    };
    rows[i].eoc_u = rate(a.err_u, b.err_u);
    rows[i].eoc_tau = a.err_tau && b.err_tau ? rate(*a.err_tau, *b.err_tau) : std::nullopt;
  }
  if (!rows.empty()) {
    rows.back().eoc_u.reset();
    rows.back().eoc_tau.reset();
  }
}

namespace {

template <typename Mesh>
std::size_t element_count(const Mesh& m) {
  if constexpr (std::is_same_v<Mesh, SurfaceMesh>)
    return m.triangle_count();
  else
    return m.tet_count();
}

template <typename Mesh>
ConvergenceReport study(std::span<const Mesh> meshes, std::span<const std::vector<double>> fields,
                        std::size_t reference, std::span<const std::vector<double>> tau_fields) {
  if (meshes.size() != fields.size())
    fail(Errc::dimension_mismatch, std::to_string(meshes.size()) + " meshes but " + std::to_string(fields.size()) +
                                       " fields");
  if (!tau_fields.empty() && tau_fields.size() != meshes.size())
    fail(Errc::dimension_mismatch, "second field list must match the mesh list");
  if (meshes.size() < 2) fail(Errc::dimension_mismatch, "a convergence study needs at least two meshes");
  if (reference >= meshes.size()) fail(Errc::bad_argument, "reference mesh index out of range");

  const Mesh& ref = meshes[reference];
  auto magnitude = [](const std::vector<double>& f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return std::max(m, 1.0);
  };
  const double vanish_u = kVanishingError * magnitude(fields[reference]);
  const double vanish_tau = tau_fields.empty() ? 0.0 : kVanishingError * magnitude(tau_fields[reference]);

  ConvergenceReport report;
  report.reference_mesh_id = reference + 1;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (i == reference) continue;
    ConvergenceRow row;
    row.mesh = i + 1;
    row.elements = element_count(meshes[i]);
    row.h = mean_mesh_size(meshes[i]);
    const auto u = i == reference ? fields[i] : project_field(meshes[i], fields[i], ref);
    row.err_u = weighted_l2_error(u, fields[reference], ref);
    if (!tau_fields.empty()) {
      const auto tau = project_field(meshes[i], tau_fields[i], ref);
      row.err_tau = weighted_l2_error(tau, tau_fields[reference], ref);
    }
    if (!report.rows.empty() && !(row.h < report.rows.back().h))
      fail(Errc::bad_argument, "meshes must be ordered by strictly decreasing h");
    report.rows.push_back(row);
  }
  auto& rows = report.rows;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const bool u_ok = rows[i].err_u > vanish_u && rows[i + 1].err_u > vanish_u;
    const bool t_ok = rows[i].err_tau && rows[i + 1].err_tau && *rows[i].err_tau > vanish_tau &&
                      *rows[i + 1].err_tau > vanish_tau;
    const double e[2] = {rows[i].err_u, rows[i + 1].err_u};
    const double h[2] = {rows[i].h, rows[i + 1].h};
    rows[i].eoc_u = u_ok ? std::optional<double>(eoc(e, h)[0]) : std::nullopt;
    if (t_ok) {
      const double et[2] = {*rows[i].err_tau, *rows[i + 1].err_tau};
      rows[i].eoc_tau = eoc(et, h)[0];
    }
  }
  return report;
}

}  // namespace

ConvergenceReport run_convergence_study(std::span<const SurfaceMesh> meshes,
                                        std::span<const std::vector<double>> fields, std::size_t reference,
                                        std::span<const std::vector<double>> tau_fields) {
  return study(meshes, fields, reference, tau_fields);
}

ConvergenceReport run_convergence_study(std::span<const TetMesh> meshes, std::span<const std::vector<double>> fields,
                                        std::size_t reference, std::span<const std::vector<double>> tau_fields) {
  return study(meshes, fields, reference, tau_fields);
}

ConvergenceReport read_convergence_table(std::istream& in) {
  ConvergenceReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto f = split(text, ',');
    if (!header) {
      if (f.size() < 4 || f.size() > 5 || trim(f[0]) != "mesh")
        fail(Errc::parse, "table header must be mesh,elements,h,err_u[,err_tau]");
      header = true;
      columns = f.size();
      continue;
    }
    if (f.size() != columns) fail(Errc::parse, "table line " + std::to_string(line_no) + ": wrong column count");
    ConvergenceRow row;
    row.mesh = static_cast<std::size_t>(parse_integer(f[0], "mesh"));
    row.elements = static_cast<std::size_t>(parse_double(f[1], "elements"));
    row.h = parse_double(f[2], "h");
    row.err_u = parse_double(f[3], "err_u");
    if (columns == 5) row.err_tau = parse_double(f[4], "err_tau");
    report.rows.push_back(row);
  }
  if (report.rows.size() < 2) fail(Errc::parse, "table needs at least two rows");
  for (const auto& r : report.rows)
    if (!(r.h > 0.0) || !(r.err_u > 0.0) || (r.err_tau && !(*r.err_tau > 0.0)))
      fail(Errc::non_positive_input, "table row " + std::to_string(r.mesh) + " has a non-positive h or error");
  compute_eoc_columns(report);
  return report;
}

ConvergenceReport load_convergence_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open table " + path.string());
  return read_convergence_table(in);
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3E", v);
  return buf;
}

std::string fixed3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

std::string opt_roundtrip(const std::optional<double>& v) { return v ? format_roundtrip(*v) : "-"; }

}  // namespace

void write_report_text(std::ostream& out, const ConvergenceReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-5s %12s %10s %12s %8s %12s %8s\n", "mesh", "#elements", "h (mm)", "err_u", "EOC_u",
                "err_tau", "EOC_tau");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-5zu %12s %10.4g %12s %8s %12s %8s\n", r.mesh,
                  sci(static_cast<double>(r.elements)).c_str(), r.h, sci(r.err_u).c_str(), fixed3(r.eoc_u).c_str(),
                  r.err_tau ? sci(*r.err_tau).c_str() : "-", fixed3(r.eoc_tau).c_str());
    out << buf;
  }
  if (report.reference_mesh_id) out << "reference mesh: " << report.reference_mesh_id << '\n';
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "mesh,elements,h,err_u,eoc_u,err_tau,eoc_tau\n";
  for (const auto& r : report.rows)
    out << r.mesh << ',' << r.elements << ',' << format_roundtrip(r.h) << ',' << format_roundtrip(r.err_u) << ','
        << opt_roundtrip(r.eoc_u) << ',' << opt_roundtrip(r.err_tau) << ',' << opt_roundtrip(r.eoc_tau) << '\n';
}

}  // namespace wsskit
