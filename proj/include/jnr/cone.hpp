#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jnr/linalg.hpp"
#include "jnr/poly.hpp"
#include "jnr/range.hpp"

namespace jnr {

/// Hyperbolicity cone C_e(f), optionally backed by a pencil when f is its
/// characteristic polynomial and e = (1, 0, ..., 0).
struct ConeSpec {
  FloatPoly f;
  Vec e;
  HyperbolicityCertificate certified;
  std::optional<MatrixPencil> pencil;

  /// Throws InvalidInput unless the Monte-Carlo check returns hyperbolic.
  static ConeSpec from_polynomial(const FloatPoly& f, const Vec& e, Rng& rng, int trials = 200);
  /// f = det(x_0 I + sum x_i A_i), checked against LU determinants at 20
  /// random points (relative 1e-9). Hyperbolicity is certified spectrally:
  /// for `trials` random a the eigenvalues of a_0 I + sum a_i A_i are checked
  /// to be roots of f(te - a).
  static ConeSpec from_pencil(const MatrixPencil& pencil, Rng& rng, int trials = 200);

  int nvars() const { return f.nvars(); }
};

/// Functional on R^{n+1} with its affine chart point when ell_0 != 0.
struct FunctionalPoint {
  Vec ell;
  std::optional<Vec> chart_point;

  static FunctionalPoint from(const Vec& ell);
};

enum class Membership { inside, boundary, outside };
const char* to_string(Membership m);

struct ConeMembership {
  Membership membership = Membership::outside;
  double margin = 0.0;     // smallest root of f(t e - a), or lambda_min
  double tolerance = 0.0;  // 1e-8 * (1 + ||a||)
  std::string method;      // "roots" or "eigen"
};

/// Classifies a by the smallest root of f(t e - a); with a pencil the roots
/// are the eigenvalues of a_0 I + sum a_i A_i unless `force_roots` is set.
ConeMembership cone_membership(const ConeSpec& spec, const Vec& a, bool force_roots = false);

struct DualConeMembership {
  Membership membership = Membership::inside;  // inside or outside only
  double margin = 0.0;                         // min of l over unit boundary samples and e
  int evaluations = 0;
  std::optional<Vec> witness;                  // boundary point with l(x) < 0
};

/// Tests l >= 0 on e and on boundary points of the cone: homogenized lowest
/// branch contacts of `cloud` plus `fresh` random boundary points.
/// EmptyCloud when a pencil-backed spec is given an empty cloud.
DualConeMembership dual_cone_membership(const ConeSpec& spec, const FunctionalPoint& ell,
                                        const BoundaryCloud& cloud, int fresh, Rng& rng);

/// Random points of the cone boundary: (-lambda_min(M(u)), u) for pencils,
/// first root of t -> f(e + t d) along random d otherwise.
std::vector<Vec> sample_cone_boundary(const ConeSpec& spec, int count, Rng& rng);

/// Gradient of f at a regular boundary point, signed so that l(e) > 0.
/// SingularBoundaryPoint when ||grad f(x)|| <= 1e-8 * scale.
FunctionalPoint normal_ray(const ConeSpec& spec, const Vec& x);

/// Keeps functionals with l(e) >= 0.
std::vector<FunctionalPoint> halfspace_filter(const std::vector<FunctionalPoint>& points, const Vec& e);

struct BaseSlice {
  std::vector<Vec> points;
  int dropped = 0;
};

/// x / l(x) for cone points with l(x) > 1e-10 * ||l|| ||x||.
BaseSlice base_slice(const std::vector<Vec>& cone_points, const Vec& ell);

/// Homogenized contact functionals (1, y) of a traced cloud.
std::vector<Vec> homogenized_contacts(const BoundaryCloud& cloud);

struct GenerationReport {
  double residual = 0.0;   // ||G c - l|| / ||l|| with c >= 0
  double tolerance = 1e-4;
  int generators = 0;
  int active = 0;
  bool generated = false;
};

/// Nonnegative least squares of l against at most 500 evenly chosen
/// generators (unit-normalized).
GenerationReport generated_by(const Vec& ell, const std::vector<Vec>& generators, double tolerance = 1e-4);

}  // namespace jnr
