#pragma once

#include <Eigen/Dense>

namespace dynsense {

/// minimize ||M x - y||_2^2 + xi * ||x||_1
struct LassoProblem {
  Eigen::MatrixXd design;
  Eigen::VectorXd observation;
  double xi = 0.01;
};

struct LassoOptions {
  double tol = 1e-8;  // relative objective decrease
  int max_iter = 10000;
  bool polish = true;  // support-restricted exact solve once the iteration settles
  /// Warm-started sequence of decreasing xi ending at the requested value.
  /// Same minimizer; much faster when xi is tiny relative to |M^T y|.
  bool continuation = false;
};

struct LassoSolution {
  Eigen::VectorXd x;
  int iterations = 0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool converged = true;
};

/// Design matrix with its Gram matrix and gradient Lipschitz constant cached,
/// for repeated solves against the same rows.
class LassoDesign {
 public:
  explicit LassoDesign(Eigen::MatrixXd design);

  const Eigen::MatrixXd& matrix() const { return design_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Lipschitz constant of the gradient of ||Mx - y||^2, i.e. 2 * lambda_max(M^T M).
  double lipschitz() const { return lipschitz_; }

 private:
  Eigen::MatrixXd design_;
  Eigen::MatrixXd gram_;
  double lipschitz_ = 0.0;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration.
double largest_eigenvalue(const Eigen::MatrixXd& psd, int max_iter = 1000, double tol = 1e-12);

/// Accelerated proximal gradient with monotone restart, started from zero.
LassoSolution solve_lasso(const LassoDesign& design, const Eigen::VectorXd& observation, double xi,
                          const LassoOptions& options = {});
LassoSolution solve_lasso(const LassoProblem& problem, const LassoOptions& options = {});

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& observation, double xi,
                       const Eigen::VectorXd& x);

/// Largest violation of the subgradient optimality conditions at x.
double kkt_residual(const LassoProblem& problem, const Eigen::VectorXd& x);
double kkt_residual(const LassoDesign& design, const Eigen::VectorXd& observation, double xi,
                    const Eigen::VectorXd& x);

/// sign(u_i) * power where |u_i| >= nu, else 0.
Eigen::VectorXd threshold_vector(const Eigen::VectorXd& u, double nu, double power);

}  // namespace dynsense
