#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <span>
#include <vector>

#include "jnr/rational.hpp"

namespace jnr {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Symmetry tolerance applied when validating user input.
inline constexpr double kHermitianInputTol = 1e-8;

/// Dense Hermitian matrix over the complex doubles.
///
/// Construction validates conjugate symmetry (relative to the Frobenius norm)
/// and then stores the exactly symmetrized matrix (A + A*)/2, so downstream code
/// may rely on exact symmetry.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Eigen::MatrixXcd& m);

  static HermitianMatrix zero(int d);
  static HermitianMatrix identity(int d);
  /// Real symmetric input; never fails.
  static HermitianMatrix from_real(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex operator()(int j, int k) const { return m_(j, k); }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;

 private:
  struct Trusted {};
  HermitianMatrix(Eigen::MatrixXcd m, Trusted) : m_(std::move(m)) {}

  Eigen::MatrixXcd m_;
};

/// Hermitian matrix with Gaussian-rational entries, row-major.
class ExactHermitianMatrix {
 public:
  ExactHermitianMatrix() = default;
  /// Throws NonHermitianInput when entries[j][k] != conj(entries[k][j]).
  ExactHermitianMatrix(int d, std::vector<GaussRational> entries);

  static ExactHermitianMatrix zero(int d);

  int dim() const { return d_; }
  const GaussRational& operator()(int j, int k) const { return entries_[j * d_ + k]; }
  HermitianMatrix to_float() const;

 private:
  int d_ = 0;
  std::vector<GaussRational> entries_;
};

/// The tuple (A_1, ..., A_n) of Hermitian matrices of a common size d.
class MatrixPencil {
 public:
  MatrixPencil() = default;
  explicit MatrixPencil(std::vector<HermitianMatrix> coeffs);

  int d() const { return d_; }
  int n() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<HermitianMatrix>& coeffs() const { return coeffs_; }
  const HermitianMatrix& operator[](int i) const { return coeffs_[i]; }

  /// sum_i u_i A_i
  HermitianMatrix combine(std::span<const double> u) const;
  /// x_0 I + sum_i x_i A_i, with x of length n + 1.
  HermitianMatrix homogeneous(std::span<const double> x) const;
  /// max_i ||A_i||_2, used as the length scale of the joint numerical range.
  double scale() const;

 private:
  int d_ = 0;
  std::vector<HermitianMatrix> coeffs_;
};

class ExactPencil {
 public:
  ExactPencil() = default;
  explicit ExactPencil(std::vector<ExactHermitianMatrix> coeffs);

  int d() const { return d_; }
  int n() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<ExactHermitianMatrix>& coeffs() const { return coeffs_; }
  MatrixPencil to_float() const;

 private:
  int d_ = 0;
  std::vector<ExactHermitianMatrix> coeffs_;
};

struct EigenSystem {
  std::vector<double> values;  // ascending
  Eigen::MatrixXcd vectors;    // unit columns, vectors.col(k) belongs to values[k]
  std::vector<int> group;      // values sharing a group id are equal within tolerance

  bool simple(int k) const;
  int size() const { return static_cast<int>(values.size()); }
};

/// Grouping tolerance for eigenvalue multiplicities: 1e-8 * (1 + ||A||_F).
double multiplicity_tolerance(double frobenius_norm);

/// Cyclic complex Jacobi eigensolver (threshold 1e-14 ||A||_F, 100 sweeps).
EigenSystem eig_hermitian(const HermitianMatrix& a);
/// Same, for unvalidated input; throws NonHermitianInput beyond 1e-8 ||A||_F.
EigenSystem eig_hermitian(const Eigen::MatrixXcd& a);

/// Smallest and largest eigenvalue shortcuts.
double lambda_min(const HermitianMatrix& a);
double lambda_max(const HermitianMatrix& a);

/// tr(AB), real for Hermitian arguments.
double pairing(const HermitianMatrix& a, const HermitianMatrix& b);
/// tr(AB) without discarding the (rounding-level) imaginary part.
Complex trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// Positive semidefinite, trace-one Hermitian matrix.
class DensityMatrix {
 public:
  /// Throws InvalidInput when the invariants fail (tolerance 1e-10).
  explicit DensityMatrix(HermitianMatrix m);

  const HermitianMatrix& matrix() const { return m_; }
  int dim() const { return m_.dim(); }
  /// Convex combination t * a + (1 - t) * b.
  static DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

 private:
  HermitianMatrix m_;
};

/// Rank-one projector onto a Haar-random unit vector.
DensityMatrix sample_pure_state(int d, Rng& rng);
/// GG* / tr(GG*) for a complex Gaussian d x d matrix G.
DensityMatrix sample_mixed_state(int d, Rng& rng);

/// GUE sample: N(0, 1) diagonal, (N + iN)/sqrt(2) off the diagonal.
HermitianMatrix random_hermitian(int d, Rng& rng);
/// n independent GUE matrices, rescaled so that scale() == 1 when `unit`.
MatrixPencil random_pencil(int d, int n, Rng& rng, bool unit = true);

/// (<psi|A_1 psi>, ..., <psi|A_n psi>)
Vec expectation(const MatrixPencil& pencil, const Eigen::VectorXcd& psi);
/// (<rho, A_1>, ..., <rho, A_n>)
Vec project_state(const MatrixPencil& pencil, const DensityMatrix& rho);

struct NnlsResult {
  Vec x;
  double residual = 0.0;  // ||Ax - b||_2
  int iterations = 0;
};

/// Lawson-Hanson nonnegative least squares: min ||Ax - b|| subject to x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Vec& b, int max_iterations = 0);

}  // namespace jnr
