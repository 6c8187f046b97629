#include "dynsense/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <stdexcept>

namespace dynsense {

double largest_eigenvalue(const Eigen::MatrixXd& psd, int max_iter, double tol) {
  if (psd.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(psd.rows()).normalized();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = psd * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - estimate) <= tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

LassoDesign::LassoDesign(Eigen::MatrixXd design) : design_(std::move(design)) {
  if (!design_.allFinite()) throw std::invalid_argument("Lasso design matrix has non-finite entries");
  gram_ = design_.transpose() * design_;
  lipschitz_ = 2.0 * largest_eigenvalue(gram_);
}

namespace {

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Objective from cached quantities: x'Gx - 2x'b + y'y + xi |x|_1.
double objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double yy, double xi,
                 const Eigen::VectorXd& x) {
  return x.dot(gram * x) - 2.0 * x.dot(b) + yy + xi * x.lpNorm<1>();
}

double kkt_from_gradient(const Eigen::VectorXd& grad, const Eigen::VectorXd& x, double xi) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double v = x(j) != 0.0 ? std::abs(grad(j) + xi * (x(j) > 0.0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(grad(j)) - xi);
    worst = std::max(worst, v);
  }
  return worst;
}

struct Polished {
  Eigen::VectorXd x;
  double kkt;
};

// f(x + d) - f(x), free of the cancellation in evaluating f directly.
double objective_change(const Eigen::MatrixXd& gram, const Eigen::VectorXd& residual_grad, double xi,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& d) {
  return d.dot(gram * d) + d.dot(residual_grad) + xi * ((x + d).lpNorm<1>() - x.lpNorm<1>());
}

// Feature-sign search: exact restricted solves on a signed active set with a
// discrete line search over sign changes, adding the worst KKT violator when
// the active set is optimal. Started from the support of x.
Polished polish(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double xi, const Eigen::VectorXd& start,
                double current_kkt) {
  const Eigen::Index n = start.size();
  Polished best{start, current_kkt};
  Eigen::VectorXd x = start;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (x(j) != 0.0) theta(j) = x(j) > 0.0 ? 1.0 : -1.0;

  const int max_steps = static_cast<int>(20 * n + 50);
  bool at_target = false;
  for (int step = 0; step < max_steps; ++step) {
    const Eigen::VectorXd grad = 2.0 * (gram * x - b);
    const double kkt = kkt_from_gradient(grad, x, xi);
    if (kkt < best.kkt) best = {x, kkt};
    if (kkt <= 1e-13 * std::max(1.0, b.cwiseAbs().maxCoeff())) break;

    // Once the active set is solved, activate the worst subgradient violator.
    if (at_target) {
      Eigen::Index worst = -1;
      double excess = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (theta(j) == 0.0 && std::abs(grad(j)) - xi > excess) {
          excess = std::abs(grad(j)) - xi;
          worst = j;
        }
      if (worst < 0) break;
      theta(worst) = grad(worst) > 0.0 ? -1.0 : 1.0;
    }

    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < n; ++j)
      if (theta(j) != 0.0) active.push_back(j);
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd sub(k, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      rhs(a) = b(active[a]) - 0.5 * xi * theta(active[a]);
      for (Eigen::Index c = 0; c < k; ++c) sub(a, c) = gram(active[a], active[c]);
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
    const Eigen::VectorXd target = cod.solve(rhs);
    if (!target.allFinite()) break;

    // Candidates: the restricted solution and every zero crossing on the way.
    std::vector<double> ts{1.0};
    for (Eigen::Index a = 0; a < k; ++a) {
      const double from = x(active[a]);
      const double to = target(a);
      if (from != 0.0 && (from > 0.0) != (to > 0.0)) ts.push_back(from / (from - to));
    }
    Eigen::VectorXd best_x = x;
    double best_f = 0.0;
    double best_t = 0.0;
    for (double t : ts) {
      Eigen::VectorXd cand = x;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double from = x(active[a]);
        double v = from + t * (target(a) - from);
        if (from != 0.0 && t == from / (from - target(a))) v = 0.0;
        cand(active[a]) = v;
      }
      const double f = objective_change(gram, grad, xi, x, cand - x);
      if (f < best_f) {
        best_f = f;
        best_t = t;
        best_x = std::move(cand);
      }
    }
    // A singular active block leaves the penalty free to fall along its null
    // space, where the objective is piecewise linear in the step.
    bool moved_in_null_space = false;
    if (cod.rank() < k) {
      Eigen::VectorXd theta_a(k);
      for (Eigen::Index a = 0; a < k; ++a) theta_a(a) = theta(active[a]);
      const Eigen::VectorXd d = -(theta_a - sub * cod.solve(theta_a));
      if (d.norm() > 1e-12 * std::sqrt(static_cast<double>(k))) {
        for (Eigen::Index a = 0; a < k; ++a) {
          const double from = x(active[a]);
          if (from == 0.0 || from * d(a) >= 0.0) continue;
          const double t = -from / d(a);
          Eigen::VectorXd cand = x;
          for (Eigen::Index c = 0; c < k; ++c) cand(active[c]) = x(active[c]) + t * d(c);
          cand(active[a]) = 0.0;
          const double f = objective_change(gram, grad, xi, x, cand - x);
          if (f < best_f) {
            best_f = f;
            best_t = t;
            best_x = std::move(cand);
            moved_in_null_space = true;
          }
        }
      }
    }
    if (moved_in_null_space) {
      at_target = false;
      x = std::move(best_x);
      for (Eigen::Index j = 0; j < n; ++j)
        theta(j) = x(j) == 0.0 ? 0.0 : (x(j) > 0.0 ? 1.0 : -1.0);
      continue;
    }
    if (best_t == 0.0) {
      if (at_target) break;
      at_target = true;  // already at the restricted optimum up to rounding
      continue;
    }
    at_target = best_t == 1.0;
    x = std::move(best_x);
    for (Eigen::Index j = 0; j < n; ++j)
      theta(j) = x(j) == 0.0 ? 0.0 : (x(j) > 0.0 ? 1.0 : -1.0);
  }
  const Eigen::VectorXd grad = 2.0 * (gram * x - b);
  const double kkt = kkt_from_gradient(grad, x, xi);
  if (kkt < best.kkt) best = {x, kkt};
  return best;
}

}  // namespace

namespace {

struct Stage {
  Eigen::VectorXd x;
  int iterations = 0;
  double kkt = 0.0;
};

// Accelerated proximal gradient for one xi, started from x0.
Stage run_stage(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double yy, double xi, double lip,
                Eigen::VectorXd x0, const LassoOptions& options, int budget) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd y = x;
  Eigen::VectorXd x_next(n);
  double f_cur = objective(gram, b, yy, xi, x);
  double t = 1.0;

  auto prox_step = [&](const Eigen::VectorXd& from, Eigen::VectorXd& out) {
    const Eigen::VectorXd grad = 2.0 * (gram * from - b);
    const double step = 1.0 / lip;
    for (Eigen::Index j = 0; j < n; ++j) out(j) = soft(from(j) - step * grad(j), step * xi);
  };

  int it = 0;
  double kkt = std::numeric_limits<double>::infinity();
  int next_kkt_check = 0;
  for (; it < budget; ++it) {
    prox_step(y, x_next);
    double f_next = objective(gram, b, yy, xi, x_next);
    if (f_next > f_cur) {
      // Momentum overshoot: restart from x with a plain proximal step.
      t = 1.0;
      prox_step(x, x_next);
      f_next = objective(gram, b, yy, xi, x_next);
      while (f_next > f_cur * (1.0 + 1e-14) + 1e-300 && lip < 1e300) {
        lip *= 2.0;  // power-iteration estimate was low
        prox_step(x, x_next);
        f_next = objective(gram, b, yy, xi, x_next);
      }
      if (f_next > f_cur) {
        ++it;
        break;
      }
      y = x_next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = x_next + ((t - 1.0) / t_next) * (x_next - x);
      t = t_next;
    }
    const double decrease = f_cur - f_next;
    x.swap(x_next);
    f_cur = f_next;

    if (decrease <= options.tol * std::max(std::abs(f_cur), std::numeric_limits<double>::min()) &&
        it >= next_kkt_check) {
      const Eigen::VectorXd grad = 2.0 * (gram * x - b);
      kkt = kkt_from_gradient(grad, x, xi);
      if (options.polish && kkt > 100.0 * options.tol) {
        auto p = polish(gram, b, xi, x, kkt);
        if (p.kkt < kkt) {
          kkt = p.kkt;
          x = std::move(p.x);
          f_cur = objective(gram, b, yy, xi, x);
          y = x;
          t = 1.0;
        }
      }
      if (kkt <= 100.0 * options.tol || !options.polish) {
        ++it;
        break;
      }
      next_kkt_check = it + 25;
    }
  }

  const Eigen::VectorXd grad = 2.0 * (gram * x - b);
  kkt = kkt_from_gradient(grad, x, xi);
  if (options.polish && kkt > 100.0 * options.tol) {
    auto p = polish(gram, b, xi, x, kkt);
    x = std::move(p.x);
    kkt = p.kkt;
  }
  return {std::move(x), it, kkt};
}

}  // namespace

LassoSolution solve_lasso(const LassoDesign& design, const Eigen::VectorXd& observation, double xi,
                          const LassoOptions& options) {
  const auto& M = design.matrix();
  if (observation.size() != M.rows()) throw std::invalid_argument("Lasso: observation length does not match rows");
  if (!(xi > 0.0)) throw std::invalid_argument("Lasso: regularization xi must be positive");
  if (!observation.allFinite()) throw std::invalid_argument("Lasso: observation has non-finite entries");

  const auto& gram = design.gram();
  const Eigen::VectorXd b = M.transpose() * observation;
  const double yy = observation.squaredNorm();
  const Eigen::Index n = M.cols();

  LassoSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  const double lip = design.lipschitz();
  const double xi_max = 2.0 * b.cwiseAbs().maxCoeff();
  // Zero design or full-shrinkage regime: x = 0 is optimal.
  if (lip == 0.0 || xi_max <= xi) {
    sol.objective = yy;
    sol.kkt_residual = kkt_from_gradient(-2.0 * b, sol.x, xi);
    return sol;
  }

  std::vector<double> schedule;
  if (options.continuation)
    for (double level = 0.5 * xi_max; level > xi; level *= 0.1) schedule.push_back(level);
  schedule.push_back(xi);

  Eigen::VectorXd x = sol.x;
  int used = 0;
  double kkt = 0.0;
  for (double level : schedule) {
    Stage stage = run_stage(gram, b, yy, level, lip, std::move(x), options, options.max_iter - used);
    x = std::move(stage.x);
    used += stage.iterations;
    kkt = stage.kkt;
  }
  sol.x = std::move(x);
  sol.iterations = used;
  sol.objective = objective(gram, b, yy, xi, sol.x);
  sol.kkt_residual = kkt;
  sol.converged = used < options.max_iter || kkt <= 100.0 * options.tol;
  return sol;
}

LassoSolution solve_lasso(const LassoProblem& problem, const LassoOptions& options) {
  return solve_lasso(LassoDesign(problem.design), problem.observation, problem.xi, options);
}

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& observation, double xi,
                       const Eigen::VectorXd& x) {
  return (design * x - observation).squaredNorm() + xi * x.lpNorm<1>();
}

double kkt_residual(const LassoProblem& problem, const Eigen::VectorXd& x) {
  if (problem.design.rows() != problem.observation.size() || problem.design.cols() != x.size())
    throw std::invalid_argument("kkt_residual: dimension mismatch");
  const Eigen::VectorXd grad = 2.0 * problem.design.transpose() * (problem.design * x - problem.observation);
  return kkt_from_gradient(grad, x, problem.xi);
}

double kkt_residual(const LassoDesign& design, const Eigen::VectorXd& observation, double xi,
                    const Eigen::VectorXd& x) {
  const Eigen::VectorXd grad = 2.0 * (design.gram() * x - design.matrix().transpose() * observation);
  return kkt_from_gradient(grad, x, xi);
}

Eigen::VectorXd threshold_vector(const Eigen::VectorXd& u, double nu, double power) {
  if (!(nu > 0.0)) throw std::invalid_argument("threshold level nu must be positive");
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    out(i) = std::abs(u(i)) >= nu ? (u(i) > 0.0 ? power : -power) : 0.0;
  return out;
}

}  // namespace dynsense
