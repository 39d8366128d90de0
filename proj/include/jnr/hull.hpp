#pragma once

#include <array>
#include <span>
#include <vector>

#include "jnr/linalg.hpp"

namespace jnr {

struct Facet {
  std::array<int, 3> v{};  // indices into ConvexHull::vertices, counterclockwise seen from outside
  Vec normal;              // outward unit normal
  double offset = 0.0;     // normal . p == offset on the facet plane
};

/// Convex hull of a finite point set in R^2 or R^3.
///
/// For n = 2 the vertices form a counterclockwise polygon. For n = 3 and a
/// full-dimensional input, facets are outward-oriented triangles. Lower
/// dimensional inputs set `flat` and keep the vertices of the hull inside their
/// affine span (`affine_dim` < n); for a planar cloud in R^3 the vertices are
/// ordered around the polygon.
struct ConvexHull {
  int n = 0;
  int affine_dim = 0;
  bool flat = false;
  std::vector<Vec> vertices;
  std::vector<int> source_index;  // index of each vertex in the input cloud
  std::vector<Facet> facets;
  double scale = 0.0;             // max |coordinate| of the input

  // Affine frame of a flat hull: origin + span of the columns of basis.
  Vec origin;
  Eigen::MatrixXd basis;
};

/// Andrew's monotone chain; collinear points dropped at tolerance 1e-12 * scale.
ConvexHull convex_hull_2d(std::span<const Vec> points);
/// Quickhull; coplanarity tolerance 1e-9 * scale.
ConvexHull convex_hull_3d(std::span<const Vec> points);
/// Dispatch on the ambient dimension (2 or 3).
ConvexHull convex_hull(std::span<const Vec> points);

/// max over hull vertices of u . v
double hull_support(const ConvexHull& hull, const Vec& u);

/// Signed distance-like violation of membership: <= 0 inside, > 0 outside.
/// For full-dimensional hulls this is the largest facet (edge) excess; flat
/// hulls add the distance to the affine span.
double hull_violation(const ConvexHull& hull, const Vec& p);

}  // namespace jnr
