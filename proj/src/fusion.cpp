#include "dynsense/fusion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynsense {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Dynamics: return "dynamics";
    case Mode::PartialReset: return "partial_reset";
    case Mode::FullReset: return "full_reset";
  }
  return "?";
}

void FusionConfig::validate() const {
  if (!(error_threshold > 0.0)) throw std::invalid_argument("fusion: error threshold eps must be positive");
  if (reset_period < 1) throw std::invalid_argument("fusion: reset period T_err must be >= 1");
  if (!(support_threshold > 0.0)) throw std::invalid_argument("fusion: support threshold nu must be positive");
  if (!(xi > 0.0)) throw std::invalid_argument("fusion: xi must be positive");
  if (!(power > 0.0)) throw std::invalid_argument("fusion: power must be positive");
}

Eigen::VectorXd clamp_estimate(const Eigen::VectorXd& raw, double power) {
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) out(i) = raw(i) >= 0.5 * power ? power : 0.0;
  return out;
}

std::vector<std::size_t> estimate_support(const Eigen::VectorXd& estimate, double power) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < estimate.size(); ++i)
    if (estimate(i) >= 0.5 * power) out.push_back(static_cast<std::size_t>(i));
  return out;
}

namespace {
Eigen::VectorXd gather(const Eigen::VectorXd& z, const QuerySet& q) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) out(static_cast<Eigen::Index>(i)) = z(static_cast<Eigen::Index>(q.indices[i]));
  return out;
}
}  // namespace

FusionCenter::FusionCenter(const PathLossMatrix& gains, FusionConfig config, QuerySet primary, QuerySet extra)
    : config_(config),
      primary_(std::move(primary)),
      extra_(std::move(extra)),
      full_(gains.gains),
      dynamics_(gains.rows(primary_.indices)),
      extra_rows_(gains.rows(extra_.indices)) {
  config_.validate();
  for (auto i : extra_.indices)
    if (primary_.contains(i)) throw std::invalid_argument("fusion: primary and extra query sets overlap");
  if (primary_.size() + extra_.size() > gains.num_sensors())
    throw std::invalid_argument("fusion: q + q' exceeds the number of sensors");
}

std::pair<FusionState, WindowResult> FusionCenter::step(const FusionState& state, const MeasurementFrame& current,
                                                        const MeasurementFrame& previous) const {
  const Eigen::Index n_sensors = full_.matrix().rows();
  if (current.z.size() != n_sensors || previous.z.size() != n_sensors)
    throw std::invalid_argument("fusion: frame length does not match the number of sensors");
  if (state.estimate.size() != full_.matrix().cols())
    throw std::invalid_argument("fusion: estimate length does not match the number of emitters");

  const double power = config_.power;
  FusionState next;
  next.window = state.window + 1;

  WindowResult result;
  result.window = next.window;
  result.cv_error = std::numeric_limits<double>::quiet_NaN();

  auto direct_recovery = [&](Mode mode) {
    const LassoSolution sol = solve_lasso(full_, current.z, config_.xi, config_.solver);
    result.mode = mode;
    result.queried = static_cast<std::size_t>(n_sensors);
    result.solver_iterations = sol.iterations;
    result.solver_converged = sol.converged;
    next.estimate = clamp_estimate(threshold_vector(sol.x, config_.support_threshold, power), power);
    next.mode = Mode::Dynamics;
  };

  if (next.window % config_.reset_period == 0) {
    direct_recovery(Mode::FullReset);
  } else if (state.mode == Mode::Dynamics) {
    const Eigen::VectorXd dz = gather(current.z, primary_) - gather(previous.z, primary_);
    const LassoSolution sol = solve_lasso(dynamics_, dz, config_.xi, config_.solver);
    const Eigen::VectorXd ds = threshold_vector(sol.x, config_.support_threshold, power);
    next.estimate = clamp_estimate(state.estimate + ds, power);

    result.mode = Mode::Dynamics;
    result.queried = primary_.size() + extra_.size();
    result.solver_iterations = sol.iterations;
    result.solver_converged = sol.converged;
    if (extra_.size() > 0) {
      const Eigen::VectorXd resid = extra_rows_ * next.estimate - gather(current.z, extra_);
      result.cv_error = resid.lpNorm<1>() / static_cast<double>(extra_.size());
    } else {
      result.cv_error = 0.0;
    }
    next.mode = result.cv_error <= config_.error_threshold ? Mode::Dynamics : Mode::PartialReset;
  } else {
    direct_recovery(Mode::PartialReset);
  }

  result.next_mode = next.mode;
  result.estimate = next.estimate;
  return {std::move(next), std::move(result)};
}

}  // namespace dynsense
