#include "wsskit/centerline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "wsskit/delaunay.hpp"
#include "wsskit/error.hpp"
#include "wsskit/format.hpp"
#include "wsskit/parallel.hpp"

namespace wsskit {

std::size_t Centerline::point_count() const {
  std::size_t n = 0;
  for (const auto& b : branches) n += b.points.size();
  return n;
}

int Centerline::section_count() const {
  int n = 0;
  for (const auto& s : sections)
    for (int label : s) n = std::max(n, label + 1);
  return n;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_hash(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1p-52 - 1.0;  // [-1, 1)
}

double mean_edge_length(const SurfaceMesh& mesh) {
  const auto v = mesh.vertices();
  double sum = 0.0;
  for (const auto& e : mesh.edges()) sum += distance(v[e[0]], v[e[1]]);
  return mesh.edges().empty() ? 0.0 : sum / static_cast<double>(mesh.edges().size());
}

// Small deterministic displacement in the local (n, t1, t2) frame, keyed by
// vertex index. Built from mesh geometry only, so a rigid motion of the
// mesh moves the perturbed points rigidly as well.
std::vector<Vec3> perturbed_vertices(const SurfaceMesh& mesh, double amplitude, std::uint64_t seed) {
  const auto v = mesh.vertices();
  const auto n = mesh.normals();
  std::vector<Vec3> out(v.begin(), v.end());
  for (std::uint32_t i = 0; i < v.size(); ++i) {
    const auto nb = mesh.neighbors(i);
    Vec3 t1;
    if (!nb.empty()) t1 = normalized(reject(v[nb.front()] - v[i], n[i]));
    const Vec3 t2 = cross(n[i], t1);
    const std::uint64_t key = (static_cast<std::uint64_t>(i) << 2) ^ (seed * 0x632be59bd9b4e019ULL);
    out[i] += amplitude * (unit_hash(key) * n[i] + unit_hash(key + 1) * t1 + unit_hash(key + 2) * t2);
  }
  return out;
}

struct Candidate {
  Tetrahedron key;  // sorted tet vertices; independent of coordinates
  Vec3 point;
  double clearance = 0.0;
};

std::vector<Candidate> interior_poles(const SurfaceMesh& mesh, const std::vector<Tetrahedron>& tets,
                                      std::span<const Vec3> points) {
  const auto v = mesh.vertices();
  const auto n = mesh.normals();
  std::vector<Vec3> centers(tets.size());
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto& q = tets[t];
    centers[t] = circumcenter(points[q[0]], points[q[1]], points[q[2]], points[q[3]]);
  }
  // For every surface vertex, the farthest circumcenter of an incident tet on
  // the inner side of its tangent plane.
  std::vector<std::int64_t> pole(v.size(), -1);
  std::vector<double> pole_d2(v.size(), -1.0);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const Vec3& c = centers[t];
    if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z)) continue;
    for (auto i : tets[t]) {
      if (dot(c - v[i], n[i]) >= 0.0) continue;
      const double d2 = squared_distance(c, v[i]);
      if (d2 > pole_d2[i] || (d2 == pole_d2[i] && static_cast<std::int64_t>(t) < pole[i])) {
        pole_d2[i] = d2;
        pole[i] = static_cast<std::int64_t>(t);
      }
    }
  }
  std::vector<std::int64_t> ids;
  for (auto p : pole)
    if (p >= 0) ids.push_back(p);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Candidate> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[i].key = tets[ids[i]];
    std::sort(out[i].key.begin(), out[i].key.end());
    out[i].point = centers[ids[i]];
  }
  return out;
}

// Greedy suppression: strongest clearance first, drop anything within
// `radius` of an accepted candidate.
std::vector<Candidate> suppress(std::vector<Candidate> cands, double radius) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.clearance > b.clearance || (a.clearance == b.clearance && a.key < b.key);
  });
  std::vector<Vec3> pts(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) pts[i] = cands[i].point;
  const KdTree tree(pts);
  std::vector<std::uint8_t> dropped(cands.size(), 0);
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (dropped[i]) continue;
    kept.push_back(cands[i]);
    for (const auto& nb : tree.within_radius(cands[i].point, radius)) dropped[nb.index] = 1;
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
  return kept;
}

std::vector<Vec3> resample(const std::vector<Vec3>& path, double spacing) {
  std::vector<double> arc(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) arc[i] = arc[i - 1] + distance(path[i - 1], path[i]);
  const double total = arc.back();
  std::vector<Vec3> out;
  std::size_t seg = 0;
  for (std::size_t k = 0;; ++k) {
    const double s = static_cast<double>(k) * spacing;
    if (s > total) break;
    while (seg + 1 < path.size() - 1 && arc[seg + 1] < s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double a = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    out.push_back(path[seg] + a * (path[seg + 1] - path[seg]));
  }
  // Close on the target; a tail shorter than half a step replaces the last sample.
  if (out.size() > 1 && total - spacing * static_cast<double>(out.size() - 1) < 0.5 * spacing) out.pop_back();
  out.push_back(path.back());
  return out;
}

std::vector<Vec3> smooth(const std::vector<Vec3>& pts, std::size_t window) {
  const std::size_t half = window / 2;
  std::vector<Vec3> out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::size_t h = std::min({half, k, pts.size() - 1 - k});
    Vec3 sum;
    for (std::size_t j = k - h; j <= k + h; ++j) sum += pts[j];
    out[k] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

}  // namespace

std::vector<Vec3> centerline_tangents(std::span<const Vec3> points) {
  if (points.size() < 2) fail(Errc::too_few_points, "a centerline branch needs at least 2 points");
  const std::size_t n = points.size();
  std::vector<Vec3> t(n);
  t[0] = normalized(points[1] - points[0]);
  t[n - 1] = normalized(points[n - 1] - points[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) t[k] = normalized(points[k + 1] - points[k - 1]);
  return t;
}

void update_topology(Centerline& cl) {
  const std::size_t nb = cl.branches.size();
  auto shared = [&](std::size_t a, std::size_t b) {
    const auto& pa = cl.branches[a].points;
    const auto& pb = cl.branches[b].points;
    std::size_t k = 0;
    while (k < pa.size() && k < pb.size() && pa[k] == pb[k]) ++k;
    return k;
  };
  std::vector<std::vector<std::size_t>> prefix(nb, std::vector<std::size_t>(nb, 0));
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) prefix[a][b] = a == b ? cl.branches[a].points.size() : shared(a, b);

  for (std::size_t b = 0; b < nb; ++b) {
    auto& br = cl.branches[b];
    br.parent = -1;
    br.shared_prefix = 0;
    for (std::size_t a = 0; a < b; ++a)
      if (prefix[b][a] > br.shared_prefix) {
        br.parent = static_cast<int>(a);
        br.shared_prefix = prefix[b][a];
      }
  }

  std::map<std::vector<std::uint8_t>, int> labels;
  // The set shared by every branch is the trunk and takes label 0.
  if (nb > 0) labels[std::vector<std::uint8_t>(nb, 1)] = 0;
  int next = 1;
  cl.sections.assign(nb, {});
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t n = cl.branches[b].points.size();
    cl.sections[b].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::uint8_t> members(nb, 0);
      for (std::size_t a = 0; a < nb; ++a) members[a] = k < prefix[b][a] ? 1 : 0;
      auto [it, inserted] = labels.try_emplace(members, next);
      if (inserted) ++next;
      cl.sections[b][k] = it->second;
    }
  }
}

Centerline make_centerline(std::vector<std::vector<Vec3>> points, std::vector<std::vector<double>> radii) {
  if (radii.size() != points.size())
    fail(Errc::length_mismatch, "radii given for " + std::to_string(radii.size()) + " of " +
                                    std::to_string(points.size()) + " branches");
  Centerline cl;
  cl.branches.resize(points.size());
  for (std::size_t b = 0; b < points.size(); ++b) {
    if (radii[b].size() != points[b].size())
      fail(Errc::length_mismatch, "branch " + std::to_string(b) + ": radius count differs from point count");
    for (double r : radii[b])
      if (!(r > 0.0)) fail(Errc::bad_argument, "branch " + std::to_string(b) + ": radii must be positive");
    cl.branches[b].tangents = centerline_tangents(points[b]);
    cl.branches[b].points = std::move(points[b]);
    cl.branches[b].radii = std::move(radii[b]);
  }
  update_topology(cl);
  return cl;
}

Centerline extract_centerline(const SurfaceMesh& mesh, const Vec3& source, std::span<const Vec3> targets,
                              const CenterlineOptions& options) {
  if (targets.empty()) fail(Errc::bad_argument, "at least one centerline target is required");
  if (!(options.spacing > 0.0)) fail(Errc::bad_argument, "centerline spacing must be positive");
  if (options.neighbors == 0) fail(Errc::bad_argument, "neighbour count must be positive");
  if (options.smoothing_window == 0 || options.smoothing_window % 2 == 0)
    fail(Errc::bad_argument, "smoothing window must be odd");
  if (mesh.vertex_count() < 4) fail(Errc::empty_mesh, "centerline extraction needs at least 4 surface vertices");

  const auto verts = mesh.vertices();
  const KdTree vertex_tree(verts);
  const SurfaceLocator surface(mesh);
  const double edge = mean_edge_length(mesh);
  auto clearance = [&](const Vec3& p) { return std::sqrt(vertex_tree.nearest(p).squared_distance); };
  auto interior = [&](const Vec3& p) { return surface.contains(p) && clearance(p) > 0.0; };

  auto check_inside = [&](const Vec3& p, const char* what) {
    if (!interior(p))
      fail(Errc::point_outside_lumen, std::string(what) + " (" + format_roundtrip(p.x) + "," + format_roundtrip(p.y) +
                                          "," + format_roundtrip(p.z) + ") is not inside the lumen");
  };
  check_inside(source, "source");
  for (const auto& t : targets) check_inside(t, "target");

  // Delaunay of slightly perturbed vertices; retry with another seed if the
  // perturbation still leaves a degenerate configuration.
  std::optional<std::vector<Tetrahedron>> tets;
  std::vector<Vec3> pts;
  for (std::uint64_t attempt = 0; attempt < 8 && !tets; ++attempt) {
    pts = perturbed_vertices(mesh, 1e-4 * edge * static_cast<double>(attempt + 1), options.seed + attempt);
    tets = delaunay_tetrahedralize(pts);
  }
  if (!tets) fail(Errc::topology, "Delaunay tetrahedralization failed on degenerate vertex configuration");

  auto cands = interior_poles(mesh, *tets, pts);
  std::vector<std::uint8_t> keep(cands.size(), 0);
  parallel_for(cands.size(), [&](std::size_t i) {
    const Vec3& c = cands[i].point;
    if (!surface.contains(c)) return;
    cands[i].clearance = clearance(c);
    keep[i] = cands[i].clearance > 0.0;
  });
  std::vector<Candidate> inside;
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (keep[i]) inside.push_back(cands[i]);
  const auto nodes_c = suppress(std::move(inside), options.merge_factor * edge);

  // Graph nodes: candidates, then the source, then the targets.
  std::vector<Vec3> nodes;
  std::vector<double> radius;
  for (const auto& c : nodes_c) {
    nodes.push_back(c.point);
    radius.push_back(c.clearance);
  }
  const auto source_id = static_cast<std::uint32_t>(nodes.size());
  nodes.push_back(source);
  radius.push_back(clearance(source));
  for (const auto& t : targets) {
    nodes.push_back(t);
    radius.push_back(clearance(t));
  }

  const KdTree node_tree(nodes);
  const std::size_t k = std::min(options.neighbors + 1, nodes.size());
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out_edges(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    for (const auto& nb : node_tree.k_nearest(nodes[i], k)) {
      if (nb.index == i) continue;
      const Vec3 mid = 0.5 * (nodes[i] + nodes[nb.index]);
      if (!interior(mid)) continue;
      const double cost = std::sqrt(nb.squared_distance) / std::min(radius[i], radius[nb.index]);
      out_edges[i].push_back({nb.index, cost});
    }
  });
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    for (const auto& [j, c] : out_edges[i]) {
      adj[i].push_back({j, c});
      adj[j].push_back({i, c});
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.first == y.first; }), a.end());
  }

  // Dijkstra; equal distances resolve to the lower predecessor index.
  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> pred(nodes.size(), none);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  dist[source_id] = 0.0;
  queue.push({0.0, source_id});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& [w, c] : adj[u]) {
      const double nd = d + c;
      if (nd < dist[w] || (nd == dist[w] && u < pred[w])) {
        const bool improved = nd < dist[w];
        dist[w] = nd;
        pred[w] = u;
        if (improved) queue.push({nd, w});
      }
    }
  }

  std::vector<std::vector<Vec3>> branch_points;
  std::vector<std::vector<double>> branch_radii;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto target_id = static_cast<std::uint32_t>(source_id + 1 + t);
    if (!std::isfinite(dist[target_id]))
      fail(Errc::no_path_found, "no interior path from the source to target " + std::to_string(t));
    std::vector<Vec3> path;
    for (auto u = target_id; u != none; u = pred[u]) path.push_back(nodes[u]);
    std::reverse(path.begin(), path.end());
    auto pts_b = smooth(resample(path, options.spacing), options.smoothing_window);
    std::vector<double> r(pts_b.size());
    for (std::size_t i = 0; i < pts_b.size(); ++i) r[i] = clearance(pts_b[i]);
    branch_points.push_back(std::move(pts_b));
    branch_radii.push_back(std::move(r));
  }
  for (std::size_t b = 0; b < branch_points.size(); ++b) {
    if (branch_points[b].size() < 2)
      fail(Errc::too_few_points, "branch " + std::to_string(b) + " is shorter than the spacing");
    for (double r : branch_radii[b])
      if (!(r > 0.0)) fail(Errc::point_outside_lumen, "smoothed centerline touches the surface");
  }
  return make_centerline(std::move(branch_points), std::move(branch_radii));
}

// ---------------------------------------------------------------- CSV

void write_centerline_csv(std::ostream& out, const Centerline& cl) {
  out << "branch_id,point_index,x,y,z,radius,tx,ty,tz\n";
  for (std::size_t b = 0; b < cl.branches.size(); ++b) {
    const auto& br = cl.branches[b];
    for (std::size_t k = 0; k < br.points.size(); ++k) {
      const auto& p = br.points[k];
      const auto& t = br.tangents[k];
      out << b << ',' << k << ',' << format_roundtrip(p.x) << ',' << format_roundtrip(p.y) << ','
          << format_roundtrip(p.z) << ',' << format_roundtrip(br.radii[k]) << ',' << format_roundtrip(t.x) << ','
          << format_roundtrip(t.y) << ',' << format_roundtrip(t.z) << '\n';
    }
  }
}

void save_centerline(const std::filesystem::path& path, const Centerline& cl) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  write_centerline_csv(out, cl);
}

Centerline read_centerline_csv(std::istream& in) {
  Centerline cl;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.rfind("branch_id", 0) == 0) continue;
    const auto f = split(text, ',');
    const auto where = "centerline line " + std::to_string(line_no);
    if (f.size() != 9) fail(Errc::parse, where + ": expected 9 columns");
    const auto b = parse_integer(f[0], "branch_id");
    const auto k = parse_integer(f[1], "point_index");
    if (b < 0 || static_cast<std::size_t>(b) > cl.branches.size())
      fail(Errc::parse, where + ": branch ids must be consecutive from 0");
    if (static_cast<std::size_t>(b) == cl.branches.size()) cl.branches.emplace_back();
    auto& br = cl.branches[static_cast<std::size_t>(b)];
    if (k != static_cast<long long>(br.points.size())) fail(Errc::parse, where + ": point indices must be consecutive");
    br.points.push_back({parse_double(f[2], "x"), parse_double(f[3], "y"), parse_double(f[4], "z")});
    br.radii.push_back(parse_double(f[5], "radius"));
    br.tangents.push_back(normalized(Vec3{parse_double(f[6], "tx"), parse_double(f[7], "ty"), parse_double(f[8], "tz")}));
  }
  if (cl.branches.empty()) fail(Errc::parse, "centerline file holds no points");
  for (const auto& br : cl.branches) {
    if (br.points.size() < 2) fail(Errc::too_few_points, "a centerline branch needs at least 2 points");
    for (double r : br.radii)
      if (!(r > 0.0)) fail(Errc::parse, "centerline radii must be positive");
  }
  update_topology(cl);
  return cl;
}

Centerline load_centerline(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open centerline " + path.string());
  return read_centerline_csv(in);
}

// ---------------------------------------------------------------- locator

namespace {

std::vector<Vec3> flatten(const Centerline& cl, std::vector<std::pair<std::uint32_t, std::uint32_t>>& ids) {
  std::vector<Vec3> pts;
  for (std::uint32_t b = 0; b < cl.branches.size(); ++b)
    for (std::uint32_t k = 0; k < cl.branches[b].points.size(); ++k) {
      pts.push_back(cl.branches[b].points[k]);
      ids.push_back({b, k});
    }
  return pts;
}

}  // namespace

CenterlineLocator::CenterlineLocator(const Centerline& cl) : cl_(&cl) { tree_ = KdTree(flatten(cl, ids_)); }

CenterlineLocator::Hit CenterlineLocator::nearest(const Vec3& q) const {
  const auto nb = tree_.nearest(q);
  return {ids_[nb.index].first, ids_[nb.index].second, std::sqrt(nb.squared_distance)};
}

std::vector<CenterlineLocator::Hit> CenterlineLocator::k_nearest(const Vec3& q, std::size_t k) const {
  std::vector<Hit> out;
  for (const auto& nb : tree_.k_nearest(q, k))
    out.push_back({ids_[nb.index].first, ids_[nb.index].second, std::sqrt(nb.squared_distance)});
  return out;
}

}  // namespace wsskit
