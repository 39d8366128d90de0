#include "jnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jnr/error.hpp"

namespace jnr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ZeroAtDirection: return "ZeroAtDirection";
    case ErrorKind::NotOnVariety: return "NotOnVariety";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::SingularForm: return "SingularForm";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NoFormFound: return "NoFormFound";
    case ErrorKind::EmptyCloud: return "EmptyCloud";
    case ErrorKind::SingularBoundaryPoint: return "SingularBoundaryPoint";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Rational parse_rational(const std::string& text) {
  Rational r;
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  if (s.empty() || r.set_str(s, 10) != 0) {
    throw Error(ErrorKind::ParseError, "not a rational number: '" + text + "'");
  }
  if (r.get_den() == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

// ---------------------------------------------------------------------------
// HermitianMatrix

namespace {

double asymmetry(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).norm(); }

}  // namespace

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square and nonempty");
  }
  const double norm = m.norm();
  if (asymmetry(m) > kHermitianInputTol * norm) {
    for (Eigen::Index j = 0; j < m.rows(); ++j)
      for (Eigen::Index k = 0; k < m.cols(); ++k)
        if (std::abs(m(j, k) - std::conj(m(k, j))) > kHermitianInputTol * norm)
          throw Error(ErrorKind::NonHermitianInput,
                      "entry (" + std::to_string(j) + "," + std::to_string(k) +
                          ") is not the conjugate of its transpose");
  }
  m_ = (m + m.adjoint()) * 0.5;
  for (Eigen::Index j = 0; j < m_.rows(); ++j) m_(j, j) = m_(j, j).real();
}

HermitianMatrix HermitianMatrix::zero(int d) {
  return HermitianMatrix(Eigen::MatrixXcd::Zero(d, d), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(int d) {
  return HermitianMatrix(Eigen::MatrixXcd::Identity(d, d), Trusted{});
}

HermitianMatrix HermitianMatrix::from_real(const Eigen::MatrixXd& m) {
  return HermitianMatrix(Eigen::MatrixXcd(m.cast<Complex>()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  return HermitianMatrix(m_ + other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  return HermitianMatrix(m_ - other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s, Trusted{});
}

ExactHermitianMatrix::ExactHermitianMatrix(int d, std::vector<GaussRational> entries)
    : d_(d), entries_(std::move(entries)) {
  if (d <= 0 || static_cast<int>(entries_.size()) != d * d) {
    throw Error(ErrorKind::DimensionMismatch, "exact matrix needs d*d entries");
  }
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k)
      if (!((*this)(j, k) == (*this)(k, j).conj()))
        throw Error(ErrorKind::NonHermitianInput,
                    "entry (" + std::to_string(j) + "," + std::to_string(k) +
                        ") is not the conjugate of its transpose");
}

ExactHermitianMatrix ExactHermitianMatrix::zero(int d) {
  return ExactHermitianMatrix(d, std::vector<GaussRational>(static_cast<size_t>(d * d)));
}

HermitianMatrix ExactHermitianMatrix::to_float() const {
  Eigen::MatrixXcd m(d_, d_);
  for (int j = 0; j < d_; ++j)
    for (int k = 0; k < d_; ++k) m(j, k) = (*this)(j, k).to_complex();
  return HermitianMatrix(m);
}

// ---------------------------------------------------------------------------
// Pencils

MatrixPencil::MatrixPencil(std::vector<HermitianMatrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "pencil needs n >= 1 matrices");
  d_ = coeffs_.front().dim();
  for (const auto& a : coeffs_)
    if (a.dim() != d_) throw Error(ErrorKind::DimensionMismatch, "pencil matrices differ in size");
}

HermitianMatrix MatrixPencil::combine(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != n()) {
    throw Error(ErrorKind::DimensionMismatch, "direction length differs from pencil n");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d_, d_);
  for (int i = 0; i < n(); ++i) m += u[i] * coeffs_[i].matrix();
  return HermitianMatrix(m);
}

HermitianMatrix MatrixPencil::homogeneous(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n() + 1) {
    throw Error(ErrorKind::DimensionMismatch, "point length differs from n + 1");
  }
  Eigen::MatrixXcd m = x[0] * Eigen::MatrixXcd::Identity(d_, d_);
  for (int i = 0; i < n(); ++i) m += x[i + 1] * coeffs_[i].matrix();
  return HermitianMatrix(m);
}

double MatrixPencil::scale() const {
  double s = 0.0;
  for (const auto& a : coeffs_) {
    const auto es = eig_hermitian(a);
    s = std::max({s, std::abs(es.values.front()), std::abs(es.values.back())});
  }
  return s;
}

ExactPencil::ExactPencil(std::vector<ExactHermitianMatrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "pencil needs n >= 1 matrices");
  d_ = coeffs_.front().dim();
  for (const auto& a : coeffs_)
    if (a.dim() != d_) throw Error(ErrorKind::DimensionMismatch, "pencil matrices differ in size");
}

MatrixPencil ExactPencil::to_float() const {
  std::vector<HermitianMatrix> out;
  out.reserve(coeffs_.size());
  for (const auto& a : coeffs_) out.push_back(a.to_float());
  return MatrixPencil(std::move(out));
}

// ---------------------------------------------------------------------------
// Eigensolver

double multiplicity_tolerance(double frobenius_norm) { return 1e-8 * (1.0 + frobenius_norm); }

bool EigenSystem::simple(int k) const {
  const int g = group[k];
  if (k > 0 && group[k - 1] == g) return false;
  if (k + 1 < size() && group[k + 1] == g) return false;
  return true;
}

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-14;

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      if (j != k) s += std::norm(a(j, k));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary G = D P, where D rotates the phase of a(p,q)
// away and P is the real Jacobi rotation.
void rotate(Eigen::MatrixXcd& a, Eigen::MatrixXcd& v, int p, int q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);

  const Eigen::Index d = a.rows();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace

EigenSystem eig_hermitian(const Eigen::MatrixXcd& a) { return eig_hermitian(HermitianMatrix(a)); }

EigenSystem eig_hermitian(const HermitianMatrix& input) {
  const int d = input.dim();
  Eigen::MatrixXcd a = input.matrix();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(d, d);
  const double norm = a.norm();
  const double threshold = kOffDiagonalTol * norm;
  // Entries this small cannot be resolved against the diagonal in double precision.
  const double negligible = 1e-18 * norm;

  bool converged = off_diagonal_norm(a) <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(a(p, q)) <= negligible) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
    converged = off_diagonal_norm(a) <= threshold;
  }
  if (!converged) {
    throw Error(ErrorKind::ConvergenceFailure, "Jacobi sweep limit reached");
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem es;
  es.values.resize(d);
  es.vectors.resize(d, d);
  es.group.resize(d);
  for (int k = 0; k < d; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    es.vectors.col(k) = v.col(order[k]).normalized();
  }
  const double tol = multiplicity_tolerance(norm);
  int g = 0;
  for (int k = 0; k < d; ++k) {
    if (k > 0 && es.values[k] - es.values[k - 1] > tol) ++g;
    es.group[k] = g;
  }
  return es;
}

double lambda_min(const HermitianMatrix& a) { return eig_hermitian(a).values.front(); }
double lambda_max(const HermitianMatrix& a) { return eig_hermitian(a).values.back(); }

Complex trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "pairing of unequal sizes");
  // tr(AB) = sum_jk A_jk B_kj
  return (a.matrix().array() * b.matrix().transpose().array()).sum();
}

double pairing(const HermitianMatrix& a, const HermitianMatrix& b) {
  return trace_product(a, b).real();
}

// ---------------------------------------------------------------------------
// States

DensityMatrix::DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {
  if (std::abs(m_.trace() - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidInput, "density matrix trace differs from 1");
  }
  if (lambda_min(m_) < -1e-10) {
    throw Error(ErrorKind::InvalidInput, "density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  return DensityMatrix(a.m_ * t + b.m_ * (1.0 - t));
}

namespace {

Eigen::VectorXcd gaussian_vector(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd g(d);
  for (int j = 0; j < d; ++j) g(j) = Complex(normal(rng), normal(rng));
  return g;
}

}  // namespace

DensityMatrix sample_pure_state(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "state dimension must be >= 1");
  const Eigen::VectorXcd psi = gaussian_vector(d, rng).normalized();
  return DensityMatrix(HermitianMatrix(psi * psi.adjoint()));
}

DensityMatrix sample_mixed_state(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "state dimension must be >= 1");
  Eigen::MatrixXcd g(d, d);
  for (int k = 0; k < d; ++k) g.col(k) = gaussian_vector(d, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianMatrix(rho));
}

HermitianMatrix random_hermitian(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "matrix dimension must be >= 1");
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < d; ++j) {
    m(j, j) = normal(rng);
    for (int k = j + 1; k < d; ++k) {
      m(j, k) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
      m(k, j) = std::conj(m(j, k));
    }
  }
  return HermitianMatrix(m);
}

MatrixPencil random_pencil(int d, int n, Rng& rng, bool unit) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "pencil needs at least one matrix");
  std::vector<HermitianMatrix> coeffs;
  for (int i = 0; i < n; ++i) coeffs.push_back(random_hermitian(d, rng));
  MatrixPencil p(coeffs);
  if (!unit || p.scale() == 0.0) return p;
  const double s = p.scale();
  for (auto& c : coeffs) c = c * (1.0 / s);
  return MatrixPencil(std::move(coeffs));
}

Vec expectation(const MatrixPencil& pencil, const Eigen::VectorXcd& psi) {
  Vec y(pencil.n());
  for (int i = 0; i < pencil.n(); ++i) {
    y(i) = psi.dot(pencil[i].matrix() * psi).real();
  }
  return y;
}

Vec project_state(const MatrixPencil& pencil, const DensityMatrix& rho) {
  Vec y(pencil.n());
  for (int i = 0; i < pencil.n(); ++i) y(i) = pairing(rho.matrix(), pencil[i]);
  return y;
}

}  // namespace jnr
