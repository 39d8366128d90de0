#include "jnr/builtin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

#include "jnr/error.hpp"

namespace jnr {

namespace {

using G = GaussRational;

G re(long v) { return G(Rational(v)); }
G im(long v) { return G(Rational(0), Rational(v)); }

ExactHermitianMatrix mat3(std::initializer_list<G> entries) {
  return ExactHermitianMatrix(3, std::vector<G>(entries));
}

}  // namespace

ExactPoly poly_from_terms(int nvars, int degree, const std::vector<Term>& terms) {
  ExactPoly p(nvars, degree);
  for (const auto& t : terms) p.add_term(t.exp, Rational(t.coeff));
  return p;
}

ExactPencil qubit_disk_pencil() {
  return ExactPencil({ExactHermitianMatrix(2, {re(0), re(1), re(1), re(0)}),
                      ExactHermitianMatrix(2, {re(0), im(-1), im(1), re(0)})});
}

ExactPencil drop_pencil() {
  return ExactPencil({mat3({re(0), re(1), re(0), re(1), re(0), re(0), re(0), re(0), re(2)}),
                      mat3({re(0), im(-1), re(0), im(1), re(0), re(0), re(0), re(0), re(0)}),
                      mat3({re(1), re(0), re(0), re(0), re(-1), re(0), re(0), re(0), re(0)})});
}

ExactPencil chien_nakazato_pencil() {
  return ExactPencil({mat3({re(1), re(0), re(0), re(0), re(-1), re(1), re(0), re(1), re(0)}),
                      mat3({re(0), re(0), im(-1), re(0), re(0), re(0), im(1), re(0), re(0)}),
                      mat3({re(0), re(0), re(0), re(0), re(0), re(0), re(0), re(0), re(1)})});
}

ExactPencil cayley_pencil() {
  // x0 I + x1 (E12 + E21) + x2 (E23 + E32) + x3 (E13 + E31)
  return ExactPencil({mat3({re(0), re(1), re(0), re(1), re(0), re(0), re(0), re(0), re(0)}),
                      mat3({re(0), re(0), re(0), re(0), re(0), re(1), re(0), re(1), re(0)}),
                      mat3({re(0), re(0), re(1), re(0), re(0), re(0), re(1), re(0), re(0)})});
}

ExactPoly chien_nakazato_cubic() {
  return poly_from_terms(4, 3,
                         {{{3, 0, 0, 0}, 1},
                          {{2, 0, 0, 1}, 1},
                          {{1, 2, 0, 0}, -2},
                          {{1, 0, 2, 0}, -1},
                          {{0, 3, 0, 0}, -1},
                          {{0, 2, 0, 1}, -1},
                          {{0, 1, 2, 0}, 1}});
}

ExactPoly chien_nakazato_quartic() {
  return poly_from_terms(4, 4,
                         {{{2, 0, 0, 2}, 4},
                          {{1, 1, 0, 2}, 8},
                          {{1, 0, 2, 1}, -4},
                          {{1, 0, 0, 3}, -24},
                          {{0, 2, 0, 2}, 4},
                          {{0, 1, 2, 1}, -4},
                          {{0, 1, 0, 3}, -8},
                          {{0, 0, 4, 0}, 1},
                          {{0, 0, 2, 2}, 8},
                          {{0, 0, 0, 4}, 20}});
}

ExactPoly cayley_cubic() { return charpoly(cayley_pencil()); }

ExactPoly steiner_quartic() {
  return poly_from_terms(4, 4,
                         {{{0, 2, 2, 0}, 1}, {{0, 2, 0, 2}, 1}, {{0, 0, 2, 2}, 1}, {{1, 1, 1, 1}, -2}});
}

ExactPoly lorentz_quadric(int nvars) {
  ExactPoly p(nvars, 2);
  for (int j = 0; j < nvars; ++j) {
    Exponent e(static_cast<size_t>(nvars), 0);
    e[j] = 2;
    p.add_term(e, Rational(j == 0 ? 1 : -1));
  }
  return p;
}

double drop_support(const Vec& u) { return std::max(u.norm(), 2.0 * u(0)); }

// ---------------------------------------------------------------------------

SymmetricForm ellipse_conic(const Ellipse& e) {
  const Eigen::Vector2d qc = e.shape * e.center;
  Eigen::Matrix3d m;
  m(0, 0) = e.center.dot(qc) - 1.0;
  m.block<1, 2>(0, 1) = -qc.transpose();
  m.block<2, 1>(1, 0) = -qc;
  m.block<2, 2>(1, 1) = e.shape;
  return SymmetricForm(m);
}

std::vector<Ellipse> default_four_ellipses() {
  auto make = [](double cx, double cy, double a, double b, double angle) {
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(angle).toRotationMatrix();
    Ellipse e;
    e.center = Eigen::Vector2d(cx, cy);
    e.shape = rot * Eigen::Vector2d(1.0 / (a * a), 1.0 / (b * b)).asDiagonal() * rot.transpose();
    return e;
  };
  return {make(0.4, 0.0, 1.0, 0.6, 0.3),
          make(-0.3, 0.2, 0.9, 0.5, -0.8),
          make(0.0, -0.35, 1.2, 0.55, 1.4),
          make(0.0, 0.0, 2.5, 2.5, 0.0)};
}

FourEllipsesResult four_ellipses_hull(const std::vector<Ellipse>& ellipses, int samples) {
  if (ellipses.empty()) throw Error(ErrorKind::InvalidInput, "no ellipses given");
  if (samples < 8) throw Error(ErrorKind::InvalidInput, "at least 8 samples per conic");
  FourEllipsesResult res;
  std::vector<Vec> all;
  std::vector<int> owner_of;
  for (size_t k = 0; k < ellipses.size(); ++k) {
    DualConicCurve curve{quadric_dual(ellipse_conic(ellipses[k])), {}};
    Eigen::Matrix3d n = curve.dual.matrix();
    Eigen::Matrix2d b = n.block<2, 2>(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b);
    if (es.eigenvalues()(0) < 0 && es.eigenvalues()(1) < 0) {
      n = -n;
      b = -b;
      es.compute(b);
    }
    if (!(es.eigenvalues()(0) > 0)) {
      throw Error(ErrorKind::SingularForm, "dual conic " + std::to_string(k) + " is not an ellipse");
    }
    const Eigen::Vector2d lin = n.block<2, 1>(1, 0);
    const Eigen::Vector2d center = -b.ldlt().solve(lin);
    const double level = lin.dot(b.ldlt().solve(lin)) - n(0, 0);
    if (!(level > 0)) {
      throw Error(ErrorKind::SingularForm, "dual conic " + std::to_string(k) + " has no real points");
    }
    const Eigen::Matrix2d axes = es.operatorInverseSqrt() * std::sqrt(level);
    for (int s = 0; s < samples; ++s) {
      const double t = 2.0 * std::numbers::pi * s / samples;
      const Vec y = center + axes * Eigen::Vector2d(std::cos(t), std::sin(t));
      curve.points.push_back(y);
      all.push_back(y);
      owner_of.push_back(static_cast<int>(k));
    }
    res.curves.push_back(std::move(curve));
  }
  res.hull = convex_hull_2d(all);
  res.redundant.assign(ellipses.size(), true);
  for (int idx : res.hull.source_index) {
    // Coinciding conics: the lowest index through the vertex owns it.
    int owner = owner_of[idx];
    const Eigen::Vector3d y(1.0, all[idx](0), all[idx](1));
    for (int k = 0; k < owner; ++k) {
      const Eigen::MatrixXd& n = res.curves[k].dual.matrix();
      if (std::abs(y.dot(n * y)) <= 1e-9 * n.norm() * y.squaredNorm()) {
        owner = k;
        break;
      }
    }
    res.hull_owner.push_back(owner);
    res.redundant[owner] = false;
  }
  return res;
}

// ---------------------------------------------------------------------------

std::vector<std::string> builtin_names() {
  return {"cayley", "drop", "chien-nakazato", "four-ellipses", "qubit-disk"};
}

BuiltinExample builtin(const std::string& name) {
  BuiltinExample ex;
  ex.name = name;
  if (name == "cayley") {
    ex.pencil = cayley_pencil();
    ex.polynomial = cayley_cubic();
    ex.expected_charpoly = cayley_cubic();
    ex.expected_dual = steiner_quartic();
  } else if (name == "drop") {
    ex.pencil = drop_pencil();
    const ExactPoly line = poly_from_terms(4, 1, {{{1, 0, 0, 0}, 1}, {{0, 1, 0, 0}, 2}});
    ex.expected_charpoly = line * lorentz_quadric(4);
  } else if (name == "chien-nakazato") {
    ex.pencil = chien_nakazato_pencil();
    ex.polynomial = chien_nakazato_cubic();
    ex.expected_charpoly = chien_nakazato_cubic();
    ex.expected_dual = chien_nakazato_quartic();
  } else if (name == "four-ellipses") {
    ex.ellipses = default_four_ellipses();
  } else if (name == "qubit-disk") {
    ex.pencil = qubit_disk_pencil();
    ex.expected_charpoly = lorentz_quadric(3);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown builtin '" + name + "'");
  }
  return ex;
}

}  // namespace jnr
