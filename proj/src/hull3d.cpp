#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "jnr/error.hpp"
#include "jnr/hull.hpp"
#include "jnr/rational.hpp"

namespace jnr {

namespace {

using V3 = Eigen::Vector3d;

// Sign of ((b - a) x (c - a)) . (p - a), exact. A floating-point evaluation
// is trusted when it clears the standard forward error bound; otherwise the
// determinant is recomputed over the rationals.
int orientation(const V3& a, const V3& b, const V3& c, const V3& p) {
  const double adx = a(0) - p(0), ady = a(1) - p(1), adz = a(2) - p(2);
  const double bdx = b(0) - p(0), bdy = b(1) - p(1), bdz = b(2) - p(2);
  const double cdx = c(0) - p(0), cdy = c(1) - p(1), cdz = c(2) - p(2);
  const double bc = bdy * cdz - bdz * cdy;
  const double ca = cdy * adz - cdz * ady;
  const double ab = ady * bdz - adz * bdy;
  const double det = adx * bc + bdx * ca + cdx * ab;
  const double permanent = (std::abs(bdy * cdz) + std::abs(bdz * cdy)) * std::abs(adx) +
                           (std::abs(cdy * adz) + std::abs(cdz * ady)) * std::abs(bdx) +
                           (std::abs(ady * bdz) + std::abs(adz * bdy)) * std::abs(cdx);
  const double bound = 7.7715611723761027e-16 * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;
  auto q = [](double v) { return Rational(v); };
  const Rational ex = q(a(0)) - q(p(0)), ey = q(a(1)) - q(p(1)), ez = q(a(2)) - q(p(2));
  const Rational fx = q(b(0)) - q(p(0)), fy = q(b(1)) - q(p(1)), fz = q(b(2)) - q(p(2));
  const Rational gx = q(c(0)) - q(p(0)), gy = q(c(1)) - q(p(1)), gz = q(c(2)) - q(p(2));
  const Rational exact = ex * (fy * gz - fz * gy) + fx * (gy * ez - gz * ey) + gx * (ey * fz - ez * fy);
  return -sgn(exact);
}

struct Face {
  std::array<int, 3> v{};
  V3 normal = V3::Zero();
  double offset = 0.0;
  std::vector<int> outside;
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
  bool visible = false;
};

class QuickHull {
 public:
  QuickHull(std::span<const Vec> points, double eps) : eps_(eps) {
    pts_.reserve(points.size());
    for (const auto& p : points) pts_.emplace_back(p(0), p(1), p(2));
  }

  const std::vector<V3>& points() const { return pts_; }

  // Returns false when no non-degenerate tetrahedron exists; `rank` then
  // holds the affine dimension of the cloud and `seed` up to three spanning
  // point indices.
  bool build(int& rank, std::array<int, 3>& seed) {
    const int n = static_cast<int>(pts_.size());
    // Extreme points along the axes; keep the most distant pair.
    std::array<int, 6> ext{};
    for (int axis = 0; axis < 3; ++axis) {
      int lo = 0;
      int hi = 0;
      for (int i = 1; i < n; ++i) {
        if (pts_[i](axis) < pts_[lo](axis)) lo = i;
        if (pts_[i](axis) > pts_[hi](axis)) hi = i;
      }
      ext[2 * axis] = lo;
      ext[2 * axis + 1] = hi;
    }
    int i0 = ext[0];
    int i1 = ext[1];
    double best = -1.0;
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) {
        const double dist = (pts_[ext[a]] - pts_[ext[b]]).norm();
        if (dist > best) {
          best = dist;
          i0 = ext[a];
          i1 = ext[b];
        }
      }
    seed = {i0, i1, -1};
    if (best <= eps_) {
      rank = 0;
      return false;
    }
    const V3 dir = (pts_[i1] - pts_[i0]).normalized();
    int i2 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const V3 r = pts_[i] - pts_[i0];
      const double dist = (r - dir * dir.dot(r)).norm();
      if (dist > best) {
        best = dist;
        i2 = i;
      }
    }
    if (i2 < 0) {
      rank = 1;
      return false;
    }
    seed[2] = i2;
    const V3 nrm = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const double dist = std::abs(nrm.dot(pts_[i] - pts_[i0]));
      if (dist > best) {
        best = dist;
        i3 = i;
      }
    }
    if (i3 < 0) {
      rank = 2;
      return false;
    }
    rank = 3;

    const std::array<int, 4> tet{i0, i1, i2, i3};
    const std::array<std::array<int, 3>, 4> tri{{{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}}};
    const std::array<int, 4> opposite{3, 2, 0, 1};
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> v{tet[tri[f][0]], tet[tri[f][1]], tet[tri[f][2]]};
      const V3 c = (pts_[v[1]] - pts_[v[0]]).cross(pts_[v[2]] - pts_[v[0]]);
      if (c.dot(pts_[tet[opposite[f]]] - pts_[v[0]]) > 0) std::swap(v[1], v[2]);
      add_face(v);
    }
    std::vector<int> all;
    all.reserve(pts_.size());
    for (int i = 0; i < n; ++i)
      if (i != i0 && i != i1 && i != i2 && i != i3) all.push_back(i);
    std::vector<int> initial{0, 1, 2, 3};
    assign(all, initial);

    while (!pending_.empty()) {
      const int target = pending_.back();
      pending_.pop_back();
      if (faces_[target].alive && faces_[target].furthest >= 0) expand(target);
    }
    return true;
  }

  std::vector<Face> alive_faces() const {
    std::vector<Face> out;
    for (const auto& f : faces_)
      if (f.alive) out.push_back(f);
    return out;
  }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  int add_face(const std::array<int, 3>& v) {
    Face f;
    f.v = v;
    const V3 c = (pts_[v[1]] - pts_[v[0]]).cross(pts_[v[2]] - pts_[v[0]]);
    const double len = c.norm();
    f.normal = len > 0 ? V3(c / len) : V3::Zero();
    f.offset = f.normal.dot(pts_[v[0]]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(std::move(f));
    for (int e = 0; e < 3; ++e) edges_[key(v[e], v[(e + 1) % 3])] = id;
    return id;
  }

  double distance(const Face& f, int p) const { return f.normal.dot(pts_[p]) - f.offset; }
  bool sees(const Face& f, int p) const {
    return orientation(pts_[f.v[0]], pts_[f.v[1]], pts_[f.v[2]], pts_[p]) > 0;
  }

  void assign(const std::vector<int>& candidates, const std::vector<int>& targets) {
    for (int p : candidates) {
      for (int fid : targets) {
        Face& f = faces_[fid];
        const double dist = distance(f, p);
        if (dist > eps_) {
          f.outside.push_back(p);
          if (dist > f.furthest_dist) {
            f.furthest_dist = dist;
            f.furthest = p;
          }
          break;
        }
      }
    }
    for (int fid : targets)
      if (faces_[fid].furthest >= 0) pending_.push_back(fid);
  }

  void expand(int start) {
    const int eye = faces_[start].furthest;
    std::vector<int> visible{start};
    faces_[start].visible = true;
    for (size_t i = 0; i < visible.size(); ++i) {
      const Face& f = faces_[visible[i]];
      for (int e = 0; e < 3; ++e) {
        const int nb = edges_.at(key(f.v[(e + 1) % 3], f.v[e]));
        if (!faces_[nb].visible && sees(faces_[nb], eye)) {
          faces_[nb].visible = true;
          visible.push_back(nb);
        }
      }
    }

    std::vector<std::array<int, 2>> horizon;
    std::vector<int> orphans;
    for (int fid : visible) {
      Face& f = faces_[fid];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e];
        const int b = f.v[(e + 1) % 3];
        const int nb = edges_.at(key(b, a));
        if (!faces_[nb].visible) horizon.push_back({a, b});
      }
      for (int p : f.outside)
        if (p != eye) orphans.push_back(p);
      f.outside.clear();
      f.outside.shrink_to_fit();
      f.alive = false;
    }
    for (int fid : visible) {
      const Face& f = faces_[fid];
      for (int e = 0; e < 3; ++e) {
        auto it = edges_.find(key(f.v[e], f.v[(e + 1) % 3]));
        if (it != edges_.end() && it->second == fid) edges_.erase(it);
      }
    }
    std::vector<int> created;
    created.reserve(horizon.size());
    for (const auto& [a, b] : horizon) created.push_back(add_face({a, b, eye}));
    assign(orphans, created);
  }

  double eps_;
  std::vector<V3> pts_;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
  std::vector<int> pending_;
};

}  // namespace

ConvexHull convex_hull_3d(std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "hull of an empty point set");
  for (const auto& p : points)
    if (p.size() != 3) throw Error(ErrorKind::DimensionMismatch, "convex_hull_3d needs 3D points");

  ConvexHull hull;
  hull.n = 3;
  for (const auto& p : points) hull.scale = std::max(hull.scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-9 * std::max(hull.scale, 1e-300);

  QuickHull qh(points, eps);
  int rank = 0;
  std::array<int, 3> seed{};
  if (qh.build(rank, seed)) {
    hull.affine_dim = 3;
    std::unordered_map<int, int> remap;
    for (const auto& f : qh.alive_faces()) {
      Facet facet;
      for (int k = 0; k < 3; ++k) {
        auto [it, inserted] = remap.try_emplace(f.v[k], static_cast<int>(hull.vertices.size()));
        if (inserted) {
          hull.vertices.push_back(points[f.v[k]]);
          hull.source_index.push_back(f.v[k]);
        }
        facet.v[k] = it->second;
      }
      facet.normal = f.normal;
      facet.offset = f.offset;
      hull.facets.push_back(std::move(facet));
    }
    return hull;
  }

  // Degenerate cloud: reduce to the affine span and hull there.
  hull.flat = true;
  hull.affine_dim = rank;
  hull.origin = points[seed[0]];
  if (rank == 0) {
    hull.basis = Eigen::MatrixXd(3, 0);
    hull.vertices.push_back(points[seed[0]]);
    hull.source_index.push_back(seed[0]);
    return hull;
  }
  const V3 b0 = (qh.points()[seed[1]] - qh.points()[seed[0]]).normalized();
  if (rank == 1) {
    hull.basis = Eigen::MatrixXd(b0);
    int lo = seed[0];
    int hi = seed[0];
    double tlo = 0.0;
    double thi = 0.0;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      const double t = b0.dot(qh.points()[i] - qh.points()[seed[0]]);
      if (t < tlo) { tlo = t; lo = i; }
      if (t > thi) { thi = t; hi = i; }
    }
    for (int i : {lo, hi}) {
      hull.vertices.push_back(points[i]);
      hull.source_index.push_back(i);
    }
    return hull;
  }
  const V3 r2 = qh.points()[seed[2]] - qh.points()[seed[0]];
  const V3 b1 = (r2 - b0 * b0.dot(r2)).normalized();
  hull.basis = Eigen::MatrixXd(3, 2);
  hull.basis.col(0) = b0;
  hull.basis.col(1) = b1;
  std::vector<Vec> local;
  local.reserve(points.size());
  for (const auto& p : points) local.push_back(hull.basis.transpose() * (p - hull.origin));
  const ConvexHull planar = convex_hull_2d(local);
  for (int i : planar.source_index) {
    hull.vertices.push_back(points[i]);
    hull.source_index.push_back(i);
  }
  return hull;
}

}  // namespace jnr
