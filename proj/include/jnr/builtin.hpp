#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jnr/dual.hpp"
#include "jnr/hull.hpp"
#include "jnr/linalg.hpp"
#include "jnr/poly.hpp"

namespace jnr {

/// Filled ellipse (x - c)^T Q (x - c) <= 1 in the plane x_0 = 1.
struct Ellipse {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Matrix2d shape = Eigen::Matrix2d::Identity();
};

/// Homogenized conic of an ellipse in (x_0, x_1, x_2).
SymmetricForm ellipse_conic(const Ellipse& e);
/// Four ellipses with a common interior around the origin; the last one is
/// large and round so that its dual sits inside the other three.
std::vector<Ellipse> default_four_ellipses();

struct DualConicCurve {
  SymmetricForm dual;
  std::vector<Vec> points;  // chart y_0 = 1
};

struct FourEllipsesResult {
  std::vector<DualConicCurve> curves;
  ConvexHull hull;
  std::vector<int> hull_owner;   // conic index per hull vertex
  std::vector<bool> redundant;   // conic owns no hull vertex
};

/// Samples each dual conic at `samples` points, hulls the union and marks
/// conics without hull vertices. SingularForm when a conic is singular or its
/// dual is not an ellipse in the chart.
FourEllipsesResult four_ellipses_hull(const std::vector<Ellipse>& ellipses, int samples);

struct BuiltinExample {
  std::string name;
  std::optional<ExactPencil> pencil;
  std::optional<ExactPoly> polynomial;      // variety to dualize when there is no pencil
  std::optional<ExactPoly> expected_charpoly;
  std::optional<ExactPoly> expected_dual;
  std::vector<Ellipse> ellipses;            // four-ellipses only
};

std::vector<std::string> builtin_names();
/// Throws InvalidInput for unknown names.
BuiltinExample builtin(const std::string& name);

ExactPencil qubit_disk_pencil();
ExactPencil drop_pencil();
ExactPencil chien_nakazato_pencil();
ExactPencil cayley_pencil();

ExactPoly chien_nakazato_cubic();
ExactPoly chien_nakazato_quartic();
ExactPoly cayley_cubic();
ExactPoly steiner_quartic();
ExactPoly lorentz_quadric(int nvars = 3);

/// Support function of the convex hull of the unit sphere and (2, 0, 0).
double drop_support(const Vec& u);

struct Term {
  Exponent exp;
  long coeff;
};
/// Homogeneous polynomial from integer terms.
ExactPoly poly_from_terms(int nvars, int degree, const std::vector<Term>& terms);

}  // namespace jnr
