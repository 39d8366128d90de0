#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "jnr/poly.hpp"

namespace jnr {

namespace {

// Parlett-Reinsch balancing by powers of two; leaves eigenvalues unchanged.
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<Complex> poly_roots(std::span<const double> coeffs) {
  double biggest = 0.0;
  for (double c : coeffs) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0.0) return {};
  int m = static_cast<int>(coeffs.size()) - 1;
  while (m > 0 && std::abs(coeffs[m]) <= 1e-14 * biggest) --m;
  if (m == 0) return {};

  std::vector<Complex> roots;
  // Exact zero roots are split off so the companion matrix stays nonsingular.
  int low = 0;
  while (low < m && coeffs[low] == 0.0) {
    roots.emplace_back(0.0);
    ++low;
  }
  const int deg = m - low;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.emplace_back(-coeffs[low] / coeffs[m]);
    return roots;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) comp(0, j) = -coeffs[m - 1 - j] / coeffs[m];
  for (int j = 1; j < deg; ++j) comp(j, j - 1) = 1.0;
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  for (const auto& r : solver.eigenvalues()) roots.push_back(r);
  return roots;
}

bool all_roots_real(std::span<const Complex> roots, double* worst_imag) {
  double max_abs = 0.0;
  double worst = 0.0;
  for (const auto& r : roots) {
    max_abs = std::max(max_abs, std::abs(r));
    worst = std::max(worst, std::abs(r.imag()));
  }
  if (worst_imag) *worst_imag = worst;
  return worst <= 1e-7 * (1.0 + max_abs);
}

}  // namespace jnr
