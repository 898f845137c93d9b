#include "wsskit/delaunay.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace wsskit {
namespace {

constexpr double kEps = 0x1p-53;
constexpr double kOrientBound = (7.0 + 56.0 * kEps) * kEps;
constexpr double kInsphereBound = (16.0 + 224.0 * kEps) * kEps;

template <typename T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// det[a-d, b-d, c-d]; negative of our orientation convention.
template <typename T>
T orient_det(const T (&a)[3], const T (&b)[3], const T (&c)[3], const T (&d)[3]) {
  const T adx = a[0] - d[0], bdx = b[0] - d[0], cdx = c[0] - d[0];
  const T ady = a[1] - d[1], bdy = b[1] - d[1], cdy = c[1] - d[1];
  const T adz = a[2] - d[2], bdz = b[2] - d[2], cdz = c[2] - d[2];
  return T(adz * (bdx * cdy - cdx * bdy) + bdz * (cdx * ady - adx * cdy) + cdz * (adx * bdy - bdx * ady));
}

template <typename T>
T insphere_det(const T (&a)[3], const T (&b)[3], const T (&c)[3], const T (&d)[3], const T (&e)[3]) {
  const T aex = a[0] - e[0], bex = b[0] - e[0], cex = c[0] - e[0], dex = d[0] - e[0];
  const T aey = a[1] - e[1], bey = b[1] - e[1], cey = c[1] - e[1], dey = d[1] - e[1];
  const T aez = a[2] - e[2], bez = b[2] - e[2], cez = c[2] - e[2], dez = d[2] - e[2];
  const T ab = aex * bey - bex * aey;
  const T bc = bex * cey - cex * bey;
  const T cd = cex * dey - dex * cey;
  const T da = dex * aey - aex * dey;
  const T ac = aex * cey - cex * aey;
  const T bd = bex * dey - dex * bey;
  const T abc = aez * bc - bez * ac + cez * ab;
  const T bcd = bez * cd - cez * bd + dez * bc;
  const T cda = cez * da + dez * ac + aez * cd;
  const T dab = dez * ab + aez * bd + bez * da;
  const T alift = aex * aex + aey * aey + aez * aez;
  const T blift = bex * bex + bey * bey + bez * bez;
  const T clift = cex * cex + cey * cey + cez * cez;
  const T dlift = dex * dex + dey * dey + dez * dez;
  return T((dlift * abc - clift * dab) + (blift * cda - alift * bcd));
}

void load(const Vec3& p, mpq_class (&out)[3]) {
  out[0] = p.x;
  out[1] = p.y;
  out[2] = p.z;
}

int orient_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  mpq_class qa[3], qb[3], qc[3], qd[3];
  load(a, qa);
  load(b, qb);
  load(c, qc);
  load(d, qd);
  return -sign_of(orient_det(qa, qb, qc, qd));
}

int insphere_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
  mpq_class qa[3], qb[3], qc[3], qd[3], qe[3];
  load(a, qa);
  load(b, qb);
  load(c, qc);
  load(d, qd);
  load(e, qe);
  return -sign_of(insphere_det(qa, qb, qc, qd, qe));
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
  const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
  const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = kOrientBound * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;
  return orient_exact(a, b, c, d);
}

int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
  const double aex = a.x - e.x, bex = b.x - e.x, cex = c.x - e.x, dex = d.x - e.x;
  const double aey = a.y - e.y, bey = b.y - e.y, cey = c.y - e.y, dey = d.y - e.y;
  const double aez = a.z - e.z, bez = b.z - e.z, cez = c.z - e.z, dez = d.z - e.z;
  const double aexbey = aex * bey, bexaey = bex * aey;
  const double bexcey = bex * cey, cexbey = cex * bey;
  const double cexdey = cex * dey, dexcey = dex * cey;
  const double dexaey = dex * aey, aexdey = aex * dey;
  const double aexcey = aex * cey, cexaey = cex * aey;
  const double bexdey = bex * dey, dexbey = dex * bey;
  const double ab = aexbey - bexaey, bc = bexcey - cexbey, cd = cexdey - dexcey;
  const double da = dexaey - aexdey, ac = aexcey - cexaey, bd = bexdey - dexbey;
  const double abc = aez * bc - bez * ac + cez * ab;
  const double bcd = bez * cd - cez * bd + dez * bc;
  const double cda = cez * da + dez * ac + aez * cd;
  const double dab = dez * ab + aez * bd + bez * da;
  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;
  const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

  const double aezp = std::abs(aez), bezp = std::abs(bez), cezp = std::abs(cez), dezp = std::abs(dez);
  const double abp = std::abs(aexbey) + std::abs(bexaey);
  const double bcp = std::abs(bexcey) + std::abs(cexbey);
  const double cdp = std::abs(cexdey) + std::abs(dexcey);
  const double dap = std::abs(dexaey) + std::abs(aexdey);
  const double acp = std::abs(aexcey) + std::abs(cexaey);
  const double bdp = std::abs(bexdey) + std::abs(dexbey);
  const double permanent = (cdp * bezp + bdp * cezp + bcp * dezp) * alift +
                           (dap * cezp + acp * dezp + cdp * aezp) * blift +
                           (abp * dezp + bdp * aezp + dap * bezp) * clift +
                           (bcp * aezp + acp * bezp + abp * cezp) * dlift;
  const double bound = kInsphereBound * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;
  return insphere_exact(a, b, c, d, e);
}

Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 u = b - a;
  const Vec3 v = c - a;
  const Vec3 w = d - a;
  const double denom = 2.0 * triple_product(u, v, w);
  const Vec3 num = squared_norm(u) * cross(v, w) + squared_norm(v) * cross(w, u) + squared_norm(w) * cross(u, v);
  return a + num / denom;
}

namespace {

struct Tet {
  std::array<std::uint32_t, 4> v;
  std::array<std::int32_t, 4> n;  // neighbour opposite v[i], -1 on the hull of the super tet
};

std::uint64_t spread_bits(std::uint64_t x) {
  x &= 0x1fffff;
  x = (x | x << 32) & 0x1f00000000ffffULL;
  x = (x | x << 16) & 0x1f0000ff0000ffULL;
  x = (x | x << 8) & 0x100f00f00f00f00fULL;
  x = (x | x << 4) & 0x10c30c30c30c30c3ULL;
  x = (x | x << 2) & 0x1249249249249249ULL;
  return x;
}

std::vector<std::uint32_t> morton_order(std::span<const Vec3> points, const Aabb& box) {
  const Vec3 ext = box.extent();
  const double scale = std::max({ext.x, ext.y, ext.z, 1e-300});
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    std::uint64_t code = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double t = (points[i][k] - box.lo[k]) / scale;
      const auto q = static_cast<std::uint64_t>(std::clamp(t, 0.0, 1.0) * 2097151.0);
      code |= spread_bits(q) << k;
    }
    keyed[i] = {code, i};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> order(points.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].second;
  return order;
}

class Triangulator {
 public:
  explicit Triangulator(std::span<const Vec3> points) : n_(static_cast<std::uint32_t>(points.size())) {
    pts_.assign(points.begin(), points.end());
    for (const auto& p : points) box_.expand(p);
    const Vec3 c = box_.center();
    const Vec3 ext = box_.extent();
    const double s = 1e3 * std::max({ext.x, ext.y, ext.z, 1.0});
    pts_.push_back(c + s * Vec3{1, 1, 1});
    pts_.push_back(c + s * Vec3{1, -1, -1});
    pts_.push_back(c + s * Vec3{-1, 1, -1});
    pts_.push_back(c + s * Vec3{-1, -1, 1});
    std::array<std::uint32_t, 4> root{n_, n_ + 1, n_ + 2, n_ + 3};
    if (orient(root) < 0) std::swap(root[2], root[3]);
    tets_.push_back({root, {-1, -1, -1, -1}});
    alive_.push_back(1);
    mark_.push_back(0);
  }

  bool run() {
    for (auto i : morton_order(std::span<const Vec3>(pts_.data(), n_), box_))
      if (!insert(i)) return false;
    return true;
  }

  std::vector<Tetrahedron> finite_tets() const {
    std::vector<Tetrahedron> out;
    for (std::size_t t = 0; t < tets_.size(); ++t) {
      if (!alive_[t]) continue;
      const auto& v = tets_[t].v;
      if (v[0] >= n_ || v[1] >= n_ || v[2] >= n_ || v[3] >= n_) continue;
      out.push_back({v[0], v[1], v[2], v[3]});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int orient(const std::array<std::uint32_t, 4>& v) const {
    return orient3d(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]]);
  }

  std::int32_t locate(std::uint32_t p) {
    std::int32_t t = last_;
    const std::size_t limit = 4 * tets_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      bool moved = false;
      const std::size_t start = rotate_++ & 3;
      for (std::size_t k = 0; k < 4 && !moved; ++k) {
        const std::size_t f = (start + k) & 3;
        auto v = tets_[t].v;
        v[f] = p;
        if (orient(v) < 0) {
          const auto next = tets_[t].n[f];
          if (next < 0) return -1;
          t = next;
          moved = true;
        }
      }
      if (!moved) return t;
    }
    return -1;
  }

  bool insert(std::uint32_t p) {
    const std::int32_t start = locate(p);
    if (start < 0) return false;
    const Vec3& q = pts_[p];

    ++stamp_;
    const std::uint32_t in_cavity = 2 * stamp_;
    const std::uint32_t rejected = 2 * stamp_ + 1;
    cavity_.assign(1, start);
    mark_[start] = in_cavity;
    boundary_.clear();
    for (std::size_t i = 0; i < cavity_.size(); ++i) {
      const auto c = cavity_[i];
      for (std::size_t f = 0; f < 4; ++f) {
        const auto nb = tets_[c].n[f];
        if (nb >= 0 && mark_[nb] == in_cavity) continue;
        if (nb >= 0 && mark_[nb] != rejected) {
          const auto& v = tets_[nb].v;
          if (insphere(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]], q) > 0) {
            mark_[nb] = in_cavity;
            cavity_.push_back(nb);
            continue;
          }
          mark_[nb] = rejected;
        }
        boundary_.push_back({c, static_cast<std::uint32_t>(f)});
      }
    }

    // One new tet per cavity boundary face.
    created_.clear();
    links_.clear();
    for (const auto& [c, f] : boundary_) {
      Tet nt = tets_[c];
      nt.v[f] = p;
      if (orient(nt.v) <= 0) return false;
      const auto outside = tets_[c].n[f];
      nt.n = {-1, -1, -1, -1};
      nt.n[f] = outside;
      const auto id = allocate(nt);
      if (outside >= 0)
        for (auto& back : tets_[outside].n)
          if (back == c) back = id;
      created_.push_back(id);
      for (std::uint32_t g = 0; g < 4; ++g) {
        if (g == f) continue;
        std::uint32_t a = 0, b = 0;
        bool first = true;
        for (std::uint32_t h = 0; h < 4; ++h) {
          if (h == g || h == f) continue;
          (first ? a : b) = nt.v[h];
          first = false;
        }
        if (a > b) std::swap(a, b);
        links_.push_back({(static_cast<std::uint64_t>(a) << 32) | b, id, g});
      }
    }
    std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) { return x.key < y.key; });
    for (std::size_t i = 0; i + 1 < links_.size(); i += 2) {
      if (links_[i].key != links_[i + 1].key) return false;
      tets_[links_[i].tet].n[links_[i].face] = links_[i + 1].tet;
      tets_[links_[i + 1].tet].n[links_[i + 1].face] = links_[i].tet;
    }
    if (links_.size() % 2 != 0) return false;
    for (auto c : cavity_) {
      alive_[c] = 0;
      free_.push_back(c);
    }
    last_ = created_.front();
    return true;
  }

  std::int32_t allocate(const Tet& t) {
    // Cavity tets are released only after all new tets exist, so a freed
    // slot never aliases a tet still referenced during this insertion.
    std::int32_t id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      tets_[id] = t;
      alive_[id] = 1;
      mark_[id] = 0;
    } else {
      id = static_cast<std::int32_t>(tets_.size());
      tets_.push_back(t);
      alive_.push_back(1);
      mark_.push_back(0);
    }
    return id;
  }

  struct Link {
    std::uint64_t key;
    std::int32_t tet;
    std::uint32_t face;
  };

  std::uint32_t n_;
  std::vector<Vec3> pts_;
  Aabb box_;
  std::vector<Tet> tets_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint32_t> mark_;
  std::vector<std::int32_t> free_;
  std::vector<std::int32_t> cavity_;
  std::vector<std::pair<std::int32_t, std::uint32_t>> boundary_;
  std::vector<std::int32_t> created_;
  std::vector<Link> links_;
  std::int32_t last_ = 0;
  std::uint32_t stamp_ = 0;
  std::size_t rotate_ = 0;
};

}  // namespace

std::optional<std::vector<Tetrahedron>> delaunay_tetrahedralize(std::span<const Vec3> points) {
  if (points.size() < 4) return std::vector<Tetrahedron>{};
  Triangulator tri(points);
  if (!tri.run()) return std::nullopt;
  return tri.finite_tets();
}

}  // namespace wsskit
