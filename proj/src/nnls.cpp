#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jnr/error.hpp"
#include "jnr/linalg.hpp"

namespace jnr {

namespace {

Vec solve_passive(const Eigen::MatrixXd& a, const Vec& b, const std::vector<int>& passive) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(passive.size()));
  for (size_t j = 0; j < passive.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(passive[j]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

// Lawson & Hanson, "Solving Least Squares Problems", ch. 23.
NnlsResult nnls(const Eigen::MatrixXd& a, const Vec& b, int max_iterations) {
  if (a.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "nnls: rows of A vs b");
  const Eigen::Index k = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * k + 10);

  NnlsResult res;
  res.x = Vec::Zero(k);
  std::vector<bool> in_passive(static_cast<size_t>(k), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * a.norm() *
                     static_cast<double>(std::max<Eigen::Index>(a.rows(), k)) *
                     std::max(1.0, b.norm());

  Vec w = a.transpose() * (b - a * res.x);
  for (; res.iterations < max_iterations; ++res.iterations) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!in_passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    in_passive[best] = true;

    while (true) {
      std::vector<int> passive;
      for (Eigen::Index j = 0; j < k; ++j)
        if (in_passive[j]) passive.push_back(static_cast<int>(j));
      if (passive.empty()) {
        res.x.setZero();
        break;
      }
      const Vec z = solve_passive(a, b, passive);
      bool feasible = true;
      for (size_t j = 0; j < passive.size(); ++j)
        if (z(static_cast<Eigen::Index>(j)) <= 0.0) feasible = false;
      if (feasible) {
        res.x.setZero();
        for (size_t j = 0; j < passive.size(); ++j) res.x(passive[j]) = z(static_cast<Eigen::Index>(j));
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < passive.size(); ++j) {
        const double zj = z(static_cast<Eigen::Index>(j));
        const double xj = res.x(passive[j]);
        if (zj <= 0.0) alpha = std::min(alpha, xj / (xj - zj));
      }
      for (size_t j = 0; j < passive.size(); ++j) {
        const int idx = passive[j];
        res.x(idx) += alpha * (z(static_cast<Eigen::Index>(j)) - res.x(idx));
        if (res.x(idx) <= tol) {
          res.x(idx) = 0.0;
          in_passive[idx] = false;
        }
      }
    }
    w = a.transpose() * (b - a * res.x);
  }
  res.residual = (a * res.x - b).norm();
  return res;
}

}  // namespace jnr
