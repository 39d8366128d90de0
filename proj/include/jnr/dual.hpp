#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "jnr/linalg.hpp"
#include "jnr/poly.hpp"
#include "jnr/range.hpp"

namespace jnr {

/// Quadratic form x^T M x with M real symmetric (float entries).
class SymmetricForm {
 public:
  SymmetricForm() = default;
  /// Throws InvalidInput when M is not square or not symmetric within 1e-12.
  explicit SymmetricForm(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  FloatPoly to_poly() const;

 private:
  Eigen::MatrixXd m_;
};

/// Rational symmetric matrix, row-major.
class ExactSymmetricForm {
 public:
  ExactSymmetricForm() = default;
  ExactSymmetricForm(int dim, std::vector<Rational> entries);

  int dim() const { return dim_; }
  const Rational& operator()(int j, int k) const { return entries_[j * dim_ + k]; }
  ExactPoly to_poly() const;

 private:
  int dim_ = 0;
  std::vector<Rational> entries_;
};

/// M^{-1}; SingularForm when |det M| <= 1e-10 * max|M_jk|^dim.
SymmetricForm quadric_dual(const SymmetricForm& m);
/// Exact inverse, optionally rescaled to coprime integer entries.
ExactSymmetricForm quadric_dual(const ExactSymmetricForm& m, bool integer_entries = false);

struct VarietyPoint {
  Eigen::VectorXcd x;  // unit length
  bool real = true;
};

/// Points of V(f) from random real lines, polished by Newton steps along the
/// line. Accepts |f(x)| <= 1e-10 ||f||_1 and ||grad f(x)|| > 1e-8 ||f||_1 at
/// unit x. InsufficientSamples after 100 * count line trials.
std::vector<VarietyPoint> sample_variety_points(const FloatPoly& f, int count, Rng& rng);

struct DegreeAttempt {
  int degree = 0;
  int monomials = 0;
  double sigma_ratio = 0.0;   // smallest / largest singular value
  double singular_gap = 0.0;  // smallest / second smallest
  double residual_rms = 0.0;  // held-out, NaN when not evaluated
  bool accepted = false;
};

struct DualFitResult {
  int degree = 0;
  FloatPoly form;             // unit coefficient 2-norm, largest coefficient positive
  double residual_rms = 0.0;
  double singular_gap = 0.0;
  int samples_used = 0;
  int held_out = 0;
  std::vector<DegreeAttempt> attempts;
  /// Set when every tangent functional is the same point (f linear).
  std::optional<Vec> point_dual;
};

/// Interpolates the lowest-degree form vanishing on normalized gradients of
/// sample points (real and complex). NoFormFound when no degree passes.
DualFitResult dual_fit(const FloatPoly& f, int max_degree, Rng& rng);

/// Gradient of f at a (possibly complex) point, scaled to unit norm.
Eigen::VectorXcd tangent_functional(const FloatPoly& f, const Eigen::VectorXcd& x);

struct DualFormReport {
  int samples = 0;
  double rms = 0.0;
  double max = 0.0;
};

/// |q(l)| over fresh tangent functionals l of V(f), both unit-normalized.
DualFormReport verify_dual_form(const FloatPoly& f, const FloatPoly& q, int samples, Rng& rng);

struct CentralityVerdict {
  bool central = false;
  double distance = 0.0;  // to the nearest cloud point
  int nearest = -1;       // index into cloud.points
};

/// Nearest-neighbour index over a cloud, compared on the coordinates in
/// `coords` (all of them when empty). R-tree for up to three coordinates,
/// linear scan beyond.
class CloudIndex {
 public:
  CloudIndex(const BoundaryCloud& cloud, std::vector<int> coords = {});
  ~CloudIndex();
  CloudIndex(CloudIndex&&) noexcept;
  CloudIndex& operator=(CloudIndex&&) noexcept;

  int n() const { return n_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<int>& coords() const { return coords_; }
  /// Index of the nearest point and its distance; throws EmptyCloud.
  std::pair<int, double> nearest(const Vec& query) const;

 private:
  struct Tree;
  int n_ = 0;
  std::vector<int> coords_;
  std::vector<Vec> points_;  // projected
  std::unique_ptr<Tree> tree_;
};

/// Proximity test: central iff some cloud point lies within `radius` of the
/// candidate. `coords` restricts the comparison to a subset of coordinates.
CentralityVerdict central_point_probe(const MatrixPencil& pencil, const Vec& candidate,
                                      const BoundaryCloud& cloud, double radius,
                                      const std::vector<int>& coords = {});
CentralityVerdict central_point_probe(const MatrixPencil& pencil, const Vec& candidate,
                                      const CloudIndex& index, double radius);

/// Membership of (y1, y3) in the convex hull of (1, 0) and the filled ellipse
/// y1^2 + 5 y3^2 - 2 y1 y3 + 2 y1 - 6 y3 + 1 <= 0.
bool chien_nakazato_ellipse_test(double y1, double y3);

}  // namespace jnr
