#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jnr/error.hpp"
#include "jnr/hull.hpp"

namespace jnr {

namespace {

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

double max_abs_coord(std::span<const Vec> points) {
  double s = 0.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace

ConvexHull convex_hull_2d(std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "hull of an empty point set");
  for (const auto& p : points)
    if (p.size() != 2) throw Error(ErrorKind::DimensionMismatch, "convex_hull_2d needs 2D points");

  ConvexHull hull;
  hull.n = 2;
  hull.scale = max_abs_coord(points);
  const double tol = 1e-12 * std::max(hull.scale * hull.scale, 1e-300);

  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return points[a](0) < points[b](0) || (points[a](0) == points[b](0) && points[a](1) < points[b](1));
  });

  std::vector<int> chain(2 * idx.size());
  size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && cross(points[chain[k - 2]], points[chain[k - 1]], points[i]) <= tol) --k;
    chain[k++] = i;
  }
  for (size_t j = idx.size() - 1, lower = k + 1; j-- > 0;) {
    const int i = idx[j];
    while (k >= lower && cross(points[chain[k - 2]], points[chain[k - 1]], points[i]) <= tol) --k;
    chain[k++] = i;
  }
  chain.resize(k > 1 ? k - 1 : k);

  // Coincident extremes collapse the chain to a single point.
  if (chain.size() == 2 && (points[chain[0]] - points[chain[1]]).norm() <= 1e-12 * hull.scale) {
    chain.resize(1);
  }
  for (int i : chain) {
    hull.vertices.push_back(points[i]);
    hull.source_index.push_back(i);
  }
  hull.affine_dim = std::min<int>(2, static_cast<int>(chain.size()) - 1);
  hull.flat = hull.affine_dim < 2;
  hull.origin = hull.vertices.front();
  if (hull.affine_dim == 1) {
    hull.basis = (hull.vertices[1] - hull.vertices[0]).normalized();
  } else if (hull.affine_dim == 0) {
    hull.basis = Eigen::MatrixXd(2, 0);
  } else {
    hull.basis = Eigen::MatrixXd::Identity(2, 2);
  }
  return hull;
}

ConvexHull convex_hull(std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "hull of an empty point set");
  switch (points.front().size()) {
    case 2: return convex_hull_2d(points);
    case 3: return convex_hull_3d(points);
    default:
      throw Error(ErrorKind::UnsupportedDimension, "hulls are built only in dimension 2 and 3");
  }
}

double hull_support(const ConvexHull& hull, const Vec& u) {
  if (hull.vertices.empty()) throw Error(ErrorKind::InvalidInput, "support of an empty hull");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : hull.vertices) best = std::max(best, u.dot(v));
  return best;
}

namespace {

// Largest edge excess of a counterclockwise polygon given in 2D coordinates.
double polygon_excess(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const Eigen::Vector2d edge = b - a;
    const double len = edge.norm();
    if (len == 0.0) continue;
    const Eigen::Vector2d normal(edge(1) / len, -edge(0) / len);
    worst = std::max(worst, normal.dot(p - a));
  }
  return worst;
}

}  // namespace

double hull_violation(const ConvexHull& hull, const Vec& p) {
  if (hull.vertices.empty()) throw Error(ErrorKind::InvalidInput, "violation of an empty hull");
  if (!hull.flat) {
    if (hull.n == 2) {
      std::vector<Eigen::Vector2d> poly;
      for (const auto& v : hull.vertices) poly.emplace_back(v(0), v(1));
      return polygon_excess(poly, Eigen::Vector2d(p(0), p(1)));
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : hull.facets) worst = std::max(worst, f.normal.dot(p) - f.offset);
    return worst;
  }
  const Vec r = p - hull.origin;
  const Vec local = hull.basis.transpose() * r;
  const double off = (r - hull.basis * local).norm();
  double inside = 0.0;
  if (hull.affine_dim == 1) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : hull.vertices) {
      const double t = hull.basis.col(0).dot(v - hull.origin);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    inside = std::max(local(0) - hi, lo - local(0));
  } else if (hull.affine_dim == 2) {
    std::vector<Eigen::Vector2d> poly;
    for (const auto& v : hull.vertices) {
      const Vec c = hull.basis.transpose() * (v - hull.origin);
      poly.emplace_back(c(0), c(1));
    }
    inside = polygon_excess(poly, Eigen::Vector2d(local(0), local(1)));
  }
  return std::max(off, inside);
}

}  // namespace jnr
