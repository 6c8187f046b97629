#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dynsense/channel.hpp"
#include "dynsense/geometry.hpp"
#include "dynsense/lasso.hpp"
#include "dynsense/query.hpp"

namespace dynsense {

enum class Mode { Dynamics, PartialReset, FullReset };

std::string_view to_string(Mode mode);

struct FusionConfig {
  double error_threshold = 1.0;    // epsilon, measurement units
  int reset_period = 4;            // T_err, windows
  double support_threshold = 0.5;  // nu
  double xi = 0.01;
  double power = 1.0;
  LassoOptions solver;

  void validate() const;
};

/// Fusion-center state carried between windows. `mode` is the mode chosen at
/// the end of the previous window.
struct FusionState {
  std::int64_t window = 0;
  Mode mode = Mode::Dynamics;
  Eigen::VectorXd estimate;  // entries in {0, P}
};

struct WindowResult {
  std::int64_t window = 0;
  Mode mode = Mode::Dynamics;       // mode executed in this window
  Mode next_mode = Mode::Dynamics;  // mode requested for the next window
  std::size_t queried = 0;
  double cv_error = 0.0;  // NaN outside dynamics mode
  Eigen::VectorXd estimate;
  int solver_iterations = 0;
  bool solver_converged = true;
};

/// Nearest of {0, P} per entry.
Eigen::VectorXd clamp_estimate(const Eigen::VectorXd& raw, double power);

/// Support (0-based) of an estimate in {0, P}^N.
std::vector<std::size_t> estimate_support(const Eigen::VectorXd& estimate, double power);

/// Three-mode fusion center: sparse recovery of the dynamics on the primary
/// query set with cross-validation on the extra set, falling back to direct
/// recovery from all sensors on failure and periodically.
class FusionCenter {
 public:
  FusionCenter(const PathLossMatrix& gains, FusionConfig config, QuerySet primary, QuerySet extra);

  /// Window k = state.window + 1. Reads only the queried entries of the frames.
  std::pair<FusionState, WindowResult> step(const FusionState& state, const MeasurementFrame& current,
                                            const MeasurementFrame& previous) const;

  const FusionConfig& config() const { return config_; }
  const QuerySet& primary() const { return primary_; }
  const QuerySet& extra() const { return extra_; }
  std::size_t num_sensors() const { return full_.matrix().rows(); }

 private:
  FusionConfig config_;
  QuerySet primary_;
  QuerySet extra_;
  LassoDesign full_;
  LassoDesign dynamics_;
  Eigen::MatrixXd extra_rows_;
};

}  // namespace dynsense
