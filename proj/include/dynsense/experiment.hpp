#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynsense/certify.hpp"
#include "dynsense/config.hpp"
#include "dynsense/fusion.hpp"

namespace dynsense {

struct WindowRecord {
  std::int64_t window = 0;
  Mode mode = Mode::Dynamics;
  std::size_t queried = 0;
  double cv_error = 0.0;
  double distance = 0.0;
  int solver_iterations = 0;
  bool solver_converged = true;
  std::size_t changes = 0;  // true entries toggled since the previous window
};

struct RunSummary {
  double avg_distance = 0.0;
  double bandwidth = 0.0;
  double savings = 0.0;
  std::size_t dynamics_windows = 0;  // T_d
  std::size_t partial_resets = 0;    // T_sr
  std::size_t full_resets = 0;       // T_r
  std::size_t nonconverged = 0;
};

struct SimulationRun {
  std::vector<WindowRecord> windows;
  RunSummary summary;
};

/// Windows k = 0 .. T-1; window 0 is always a full reset.
SimulationRun run_simulation(const ExperimentConfig& config, std::uint64_t seed);

struct SweepCell {
  std::size_t index = 0;  // 1-based, lexicographic over (eps, T_err, nu)
  double eps = 0.0;       // units of P
  int reset_period = 1;
  double nu = 0.0;  // units of P
};

std::vector<SweepCell> enumerate_sweep(const SweepSection& sweep);

struct SweepRow {
  SweepCell cell;
  std::size_t trials = 0;  // trials that completed
  double avg_distance = 0.0;
  double distance_std_error = 0.0;
  double bandwidth = 0.0;
  double savings = 0.0;
  double dynamics_windows = 0.0;
  double partial_resets = 0.0;
  double full_resets = 0.0;
  std::string error;  // first failure message, empty when all trials ran
};

/// Every (cell, trial) pair runs independently; trial t uses derive_seed(seed, t)
/// in every cell. Rows come back in cell order regardless of scheduling.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials);

struct BaselineRow {
  int window = 0;
  double avg_distance = 0.0;
  double std_error = 0.0;  // across trials, or across windows for a single trial
  std::size_t trials = 0;
};

/// Direct recovery every window (T_err = 1) for each W in config.baseline.
std::vector<BaselineRow> run_baseline(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials);

struct CertifyRow {
  std::string check;
  std::string statistic;
  double value = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  bool pass = true;
};

std::vector<CertifyRow> run_certify(const ExperimentConfig& config, std::uint64_t seed);

/// Circular layout, query and processed matrix for certification trial `trial`.
struct CertifyInstance {
  CircularLayout layout;
  QuerySet query;
  ProcessedMatrix matrix;
};
CertifyInstance make_certify_instance(const ExperimentConfig& config, std::uint64_t seed, std::size_t q);

/// Exhaustive when C(N, p) allows it, sampled otherwise.
RipEstimate estimate_rip(const Eigen::MatrixXd& m, std::size_t order, std::size_t draws, Rng& rng);

struct RipRow {
  std::size_t trial = 0;
  std::size_t q = 0;
  std::size_t emitters = 0;
  RipEstimate estimate;
};

std::vector<RipRow> run_rip(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials);

struct NspRow {
  std::size_t trial = 0;
  std::size_t q = 0;
  std::size_t emitters = 0;
  NspResult result;
  double rip_constant = 0.0;  // RIP constant of order 2S on the same matrix
  bool rip_exhaustive = true;
};

std::vector<NspRow> run_nsp(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials);

// CSV emission. Every file starts with the resolved config as '#' comments.
void write_windows_csv(std::ostream& out, const ExperimentConfig& config, const SimulationRun& run);
void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const SimulationRun& run);
void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<SweepRow>& rows);
void write_baseline_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<BaselineRow>& rows);
void write_certify_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<CertifyRow>& rows);
void write_rip_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<RipRow>& rows);
void write_nsp_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<NspRow>& rows);

}  // namespace dynsense
