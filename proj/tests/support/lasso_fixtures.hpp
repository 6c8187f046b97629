#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dynsense/rng.hpp"

namespace dynsense::testing {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline Eigen::VectorXd sparse_signs(Eigen::Index n, std::size_t s, Rng& rng) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::uniform_int_distribution<Eigen::Index> pos(0, n - 1);
  std::bernoulli_distribution sign(0.5);
  std::size_t placed = 0;
  while (placed < s) {
    const Eigen::Index j = pos(rng);
    if (x(j) != 0.0) continue;
    x(j) = sign(rng) ? 1.0 : -1.0;
    ++placed;
  }
  return x;
}

// Every Lasso minimizer solves G_TT x_T = b_T - xi/2 sign(x_T) on its support T.
// Enumerating all signed supports and keeping sign-consistent solutions finds
// the global minimum without any iterative solver.
struct OracleResult {
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::infinity();
};

inline OracleResult exhaustive_lasso(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double xi, std::size_t max_support) {
  const auto n = static_cast<std::size_t>(m.cols());
  const Eigen::MatrixXd gram = m.transpose() * m;
  const Eigen::VectorXd b = m.transpose() * y;
  OracleResult best;
  best.x = Eigen::VectorXd::Zero(m.cols());
  best.objective = y.squaredNorm();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> support;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (1u << j)) support.push_back(static_cast<Eigen::Index>(j));
    if (support.size() > max_support) continue;
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index c = 0; c < k; ++c) sub(a, c) = gram(support[a], support[c]);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < k) continue;
    for (std::uint32_t signs = 0; signs < (1u << k); ++signs) {
      Eigen::VectorXd rhs(k), theta(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        theta(a) = (signs & (1u << a)) ? -1.0 : 1.0;
        rhs(a) = b(support[a]) - 0.5 * xi * theta(a);
      }
      const Eigen::VectorXd z = lu.solve(rhs);
      bool consistent = true;
      for (Eigen::Index a = 0; a < k; ++a) consistent = consistent && z(a) * theta(a) > 0.0;
      if (!consistent) continue;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(m.cols());
      for (Eigen::Index a = 0; a < k; ++a) x(support[a]) = z(a);
      const double f = (m * x - y).squaredNorm() + xi * x.lpNorm<1>();
      if (f < best.objective) {
        best.objective = f;
        best.x = x;
      }
    }
  }
  return best;
}

}  // namespace dynsense::testing
