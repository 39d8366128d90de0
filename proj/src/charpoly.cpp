#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cmath>

#include "jnr/poly.hpp"

namespace jnr {

namespace {

using GaussPoly = MultiPoly<GaussRational>;

}  // namespace

// Leibniz expansion organized row by row: dp[mask] holds the signed sum over
// partial permutations that send the first popcount(mask) rows onto the
// columns in mask.
ExactPoly charpoly(const ExactPencil& pencil) {
  const int d = pencil.d();
  const int nv = pencil.n() + 1;
  if (d > kMaxExactDim) {
    throw Error(ErrorKind::DimensionTooLarge,
                "exact charpoly supports d <= " + std::to_string(kMaxExactDim));
  }
  std::vector<std::vector<GaussPoly>> entry(d, std::vector<GaussPoly>(d, GaussPoly(nv, 1)));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      std::vector<GaussRational> lin(static_cast<size_t>(nv));
      lin[0] = GaussRational(Rational(j == k ? 1 : 0));
      for (int i = 0; i < pencil.n(); ++i) lin[i + 1] = pencil.coeffs()[i](j, k);
      entry[j][k] = GaussPoly::linear(lin);
    }

  const unsigned full = (1u << d) - 1u;
  std::vector<std::optional<GaussPoly>> dp(full + 1);
  dp[0] = GaussPoly::constant(nv, GaussRational(Rational(1)));
  for (unsigned mask = 0; mask < full; ++mask) {
    if (!dp[mask] || dp[mask]->is_zero()) continue;
    const int row = std::popcount(mask);
    for (int c = 0; c < d; ++c) {
      if (mask & (1u << c)) continue;
      if (entry[row][c].is_zero()) continue;
      const int larger_used = std::popcount(mask >> (c + 1));
      GaussPoly term = *dp[mask] * entry[row][c];
      if (larger_used % 2) term = -term;
      const unsigned next = mask | (1u << c);
      dp[next] = dp[next] ? *dp[next] + term : term;
    }
  }

  ExactPoly out(nv, d);
  if (!dp[full]) return out;
  for (const auto& [e, c] : dp[full]->terms()) {
    if (!c.is_real()) {
      throw Error(ErrorKind::NonHermitianInput, "determinant has a non-real coefficient");
    }
    out.add_term(e, c.re);
  }
  return out;
}

double pencil_det(const MatrixPencil& pencil, const Vec& x) {
  const auto m = pencil.homogeneous(std::span<const double>(x.data(), static_cast<size_t>(x.size())));
  return m.matrix().partialPivLu().determinant().real();
}

FloatPoly charpoly_float(const MatrixPencil& pencil, std::uint64_t seed) {
  const int nv = pencil.n() + 1;
  const int d = pencil.d();
  const auto basis = monomials(nv, d);
  const Eigen::Index cols = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index rows = 2 * cols + 8;
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(rows, cols);
  Vec rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Vec x(nv);
    for (int j = 0; j < nv; ++j) x(j) = normal(rng);
    x.normalize();
    for (Eigen::Index c = 0; c < cols; ++c) {
      double v = 1.0;
      for (int j = 0; j < nv; ++j) v *= std::pow(x(j), basis[c][j]);
      a(r, c) = v;
    }
    rhs(r) = pencil_det(pencil, x);
  }
  const Vec coef = a.colPivHouseholderQr().solve(rhs);
  const double big = coef.cwiseAbs().maxCoeff();
  FloatPoly out(nv, d);
  for (Eigen::Index c = 0; c < cols; ++c)
    if (std::abs(coef(c)) > 1e-11 * big) out.add_term(basis[c], coef(c));
  return out;
}

bool verify_factorization(const ExactPoly& p, std::span<const ExactPoly> factors) {
  if (factors.empty()) return false;
  ExactPoly prod = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) prod = prod * factors[i];
  return prod == p;
}

}  // namespace jnr
