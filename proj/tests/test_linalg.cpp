#include "doctest.h"

#include <cmath>

#include "jnr/builtin.hpp"
#include "jnr/error.hpp"
#include "jnr/linalg.hpp"

using namespace jnr;

namespace {

HermitianMatrix pauli_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianMatrix(m);
}

HermitianMatrix pauli_y() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianMatrix(m);
}

double reconstruction_error(const HermitianMatrix& a, const EigenSystem& es) {
  Eigen::VectorXd lam(es.size());
  for (int k = 0; k < es.size(); ++k) lam(k) = es.values[k];
  const Eigen::MatrixXcd back = es.vectors * lam.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  return (back - a.matrix()).norm();
}

}  // namespace

TEST_CASE("hermitian input is validated and symmetrized") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1, 2, 3, 1;
  CHECK_THROWS_AS(HermitianMatrix{bad}, Error);
  try {
    HermitianMatrix{bad};
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitianInput);
  }

  Eigen::MatrixXcd close(2, 2);
  close << 1, Complex(1, 1e-12), Complex(1, -1e-12), 2;
  const HermitianMatrix h(close);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  CHECK(h(0, 0).imag() == 0.0);
}

TEST_CASE("eigenvalues of small fixed matrices") {
  SUBCASE("diagonal") {
    Eigen::MatrixXd d = Eigen::Vector3d(3, 1, 2).asDiagonal();
    const EigenSystem es = eig_hermitian(HermitianMatrix::from_real(d));
    CHECK(es.values[0] == doctest::Approx(1.0));
    CHECK(es.values[1] == doctest::Approx(2.0));
    CHECK(es.values[2] == doctest::Approx(3.0));
    // Permuted identity: each eigenvector is a coordinate vector.
    CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(0, 2)) == doctest::Approx(1.0));
  }
  SUBCASE("pauli x") {
    const EigenSystem es = eig_hermitian(pauli_x());
    CHECK(es.values[0] == doctest::Approx(-1.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
  }
  SUBCASE("block with a 2x2 swap and a scalar") {
    // The 2x2 block has characteristic polynomial t^2 - 1; quadratic formula.
    const HermitianMatrix a = drop_pencil().to_float()[0];
    const double root = std::sqrt(4.0) / 2.0;
    const EigenSystem es = eig_hermitian(a);
    CHECK(es.values[0] == doctest::Approx(-root).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx(root).epsilon(1e-12));
    CHECK(es.values[2] == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("eigendecomposition invariants on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 8;
    const HermitianMatrix a = random_hermitian(d, rng);
    const double fro = a.frobenius_norm();
    const EigenSystem es = eig_hermitian(a);

    CHECK(reconstruction_error(a, es) <= 1e-10 * fro);
    const Eigen::MatrixXcd gram = es.vectors.adjoint() * es.vectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(d, d)).norm() <= 1e-10 * d);

    double sum = 0.0;
    double sq = 0.0;
    for (int k = 0; k < d; ++k) {
      CHECK((a.matrix() * es.vectors.col(k) - es.values[k] * es.vectors.col(k)).norm() <= 1e-10 * fro);
      if (k > 0) CHECK(es.values[k - 1] <= es.values[k]);
      sum += es.values[k];
      sq += es.values[k] * es.values[k];
    }
    CHECK(std::abs(sum - a.trace()) <= 1e-9 * fro);
    CHECK(std::abs(sq - pairing(a, a)) <= 1e-9 * fro * fro);

    // Rebuild from the decomposition and decompose again.
    Eigen::VectorXd lam(d);
    for (int k = 0; k < d; ++k) lam(k) = es.values[k];
    const HermitianMatrix rebuilt(Eigen::MatrixXcd(es.vectors * lam.cast<Complex>().asDiagonal() * es.vectors.adjoint()));
    const EigenSystem again = eig_hermitian(rebuilt);
    for (int k = 0; k < d; ++k) CHECK(std::abs(again.values[k] - es.values[k]) <= 1e-8);

    CHECK(lambda_min(a) == doctest::Approx(es.values.front()));
    CHECK(lambda_max(a) == doctest::Approx(es.values.back()));
  }
}

TEST_CASE("repeated eigenvalues are grouped") {
  Eigen::MatrixXd d = Eigen::Vector4d(1, 1, 2, 5).asDiagonal();
  const EigenSystem es = eig_hermitian(HermitianMatrix::from_real(d));
  CHECK_FALSE(es.simple(0));
  CHECK_FALSE(es.simple(1));
  CHECK(es.simple(2));
  CHECK(es.simple(3));
  CHECK(multiplicity_tolerance(0.0) == doctest::Approx(1e-8));
}

TEST_CASE("pairing is the trace of the product") {
  CHECK(pairing(HermitianMatrix::identity(3), HermitianMatrix::identity(3)) == doctest::Approx(3.0));
  CHECK(pairing(pauli_x(), pauli_y()) == doctest::Approx(0.0));
  CHECK(pairing(pauli_x(), pauli_x()) == doctest::Approx(2.0));
  CHECK_THROWS_AS(pairing(pauli_x(), HermitianMatrix::identity(3)), Error);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix a = random_hermitian(4, rng);
    const DensityMatrix rho = sample_mixed_state(4, rng);
    CHECK(std::abs(trace_product(rho.matrix(), a).imag()) <= 1e-12 * (1.0 + a.frobenius_norm()));
    CHECK(pairing(a, rho.matrix()) == doctest::Approx(pairing(rho.matrix(), a)).epsilon(1e-12));
  }
}

TEST_CASE("pure states") {
  Rng rng(3);
  const DensityMatrix one = sample_pure_state(1, rng);
  CHECK(one.matrix()(0, 0).real() == doctest::Approx(1.0));

  const DensityMatrix p = sample_pure_state(2, rng);
  const EigenSystem es = eig_hermitian(p.matrix());
  CHECK(p.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(es.values[0]) <= 1e-10);

  // Unitary invariance: the average projector is I/d.
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(4, 4);
  const int count = 10000;
  for (int s = 0; s < count; ++s) mean += sample_pure_state(4, rng).matrix().matrix();
  mean /= count;
  CHECK((mean - 0.25 * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("mixed states") {
  Rng rng(4);
  CHECK(sample_mixed_state(1, rng).matrix()(0, 0).real() == doctest::Approx(1.0));
  for (int s = 0; s < 20; ++s) {
    const DensityMatrix a = sample_mixed_state(3, rng);
    const EigenSystem es = eig_hermitian(a.matrix());
    CHECK(es.values[0] > 0.0);
    CHECK(std::abs(es.values[0] + es.values[1] + es.values[2] - 1.0) <= 1e-10);
    const DensityMatrix b = sample_mixed_state(3, rng);
    const DensityMatrix m = DensityMatrix::mix(a, b, 0.3);
    CHECK(lambda_min(m.matrix()) >= -1e-10);
    CHECK(m.matrix().trace() == doctest::Approx(1.0).epsilon(1e-10));
  }
  Eigen::MatrixXd notrace = Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::from_real(notrace)), Error);
}

TEST_CASE("pencils") {
  const MatrixPencil p = chien_nakazato_pencil().to_float();
  CHECK(p.d() == 3);
  CHECK(p.n() == 3);
  const double u[] = {0.5, -1.0, 2.0};
  const HermitianMatrix m = p.combine(u);
  const Eigen::MatrixXcd direct = 0.5 * p[0].matrix() - p[1].matrix() + 2.0 * p[2].matrix();
  CHECK((m.matrix() - direct).norm() <= 1e-14);
  const double x[] = {3.0, 0.5, -1.0, 2.0};
  CHECK((p.homogeneous(x).matrix() - (direct + 3.0 * Eigen::MatrixXcd::Identity(3, 3))).norm() <= 1e-14);

  std::vector<HermitianMatrix> mixed{HermitianMatrix::identity(2), HermitianMatrix::identity(3)};
  CHECK_THROWS_AS(MatrixPencil{mixed}, Error);

  Rng rng(9);
  CHECK(random_pencil(4, 3, rng).scale() == doctest::Approx(1.0));
}

TEST_CASE("expectation matches the state pairing") {
  Rng rng(21);
  const MatrixPencil p = random_pencil(5, 3, rng);
  for (int s = 0; s < 10; ++s) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(5);
    psi.normalize();
    const DensityMatrix rho(HermitianMatrix(Eigen::MatrixXcd(psi * psi.adjoint())));
    CHECK((expectation(p, psi) - project_state(p, rho)).norm() <= 1e-12);
  }
}

TEST_CASE("nonnegative least squares") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Vec b(3);
  b << 1, -1, 0;
  // Unconstrained optimum has x1 < 0, so the constrained one clamps it.
  const NnlsResult r = nnls(a, b);
  CHECK(r.x(1) == doctest::Approx(0.0));
  CHECK(r.x(0) == doctest::Approx(0.5));
  CHECK(r.residual == doctest::Approx(std::sqrt(0.25 + 1.0 + 0.25)));

  Vec exact(2);
  exact << 2, 3;
  const NnlsResult s = nnls(a, a * exact);
  CHECK((s.x - exact).norm() <= 1e-12);
}
