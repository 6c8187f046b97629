#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynsense/geometry.hpp"
#include "dynsense/query.hpp"
#include "dynsense/rng.hpp"

namespace dynsense {

// ---------------------------------------------------------------------------
// Linear processing A = B W Lambda_Q of a pair-structured query.
// ---------------------------------------------------------------------------

/// Block-diagonal q x q matrix of q/2 blocks [[1,-1],[-1,1]]. Throws for odd q.
Eigen::MatrixXd build_differencing(std::size_t q);

/// E[g^2] for the difference of gains seen by two diametrically opposite
/// sensors on a circle of radius `sensor_radius`, averaged over a uniform
/// emitter angle on the emitter circle. Adaptive Gauss-Kronrod quadrature to
/// absolute tolerance 1e-10; throws std::runtime_error if it does not converge.
double variance_of_g(double sensor_radius, double emitter_radius, double offset_k, double sensor_angle = 0.0);
double variance_of_g(const CircularLayout& layout, std::size_t circle, double offset_k);

/// Difference of gains between sensor pair (angle, angle + pi) for an emitter at `emitter_angle`.
double pair_gain_difference(double sensor_radius, double sensor_angle, double emitter_radius, double emitter_angle,
                            double offset_k);

struct ProcessedMatrix {
  Eigen::MatrixXd differenced;     // G = W Lambda_Q
  Eigen::MatrixXd processed;       // A = B G
  Eigen::VectorXd scale;           // diagonal of B
  std::vector<double> row_variance;  // Var(g_i1) per row
};

/// Throws std::invalid_argument unless the query is a union of diametric pairs.
ProcessedMatrix build_processed(const CircularLayout& layout, const QuerySet& query, double offset_k, Rng& rng);

// ---------------------------------------------------------------------------
// Restricted isometry and null-space checks.
// ---------------------------------------------------------------------------

enum class RipMethod { Exhaustive, Sampled };

struct RipEstimate {
  std::size_t order = 0;
  double constant = 0.0;
  RipMethod method = RipMethod::Exhaustive;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t supports_checked = 0;
};

inline constexpr std::uint64_t kMaxEnumeratedSupports = 1'000'000;

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// RIP constant of (1/sqrt(q)) M over every support of size min(p, N). Support
/// blocks are spread over OpenMP threads. Throws std::length_error when
/// C(N, p) exceeds kMaxEnumeratedSupports.
RipEstimate estimate_rip_exhaustive(const Eigen::MatrixXd& m, std::size_t order);
/// Single-threaded reference for estimate_rip_exhaustive.
RipEstimate estimate_rip_exhaustive_serial(const Eigen::MatrixXd& m, std::size_t order);
/// Lower bound over `draws` random supports.
RipEstimate estimate_rip_sampled(const Eigen::MatrixXd& m, std::size_t order, std::size_t draws, Rng& rng);

struct NspWitness {
  std::vector<std::size_t> support;
  std::vector<int> signs;
  Eigen::VectorXd recovered;
};

struct NspResult {
  bool pass = true;
  bool solver_failure = false;
  std::size_t order = 0;
  std::uint64_t problems_checked = 0;
  std::optional<NspWitness> witness;
};

/// Exact-recovery oracle: for every support of size <= S and every sign
/// pattern on it, Basis Pursuit (small-xi Lasso, polished and KKT-checked)
/// must return the +-1 vector. Stops at the first failure.
NspResult nsp_recovery_oracle(const Eigen::MatrixXd& m, std::size_t order);

// ---------------------------------------------------------------------------
// Monte Carlo certification of column statistics.
// ---------------------------------------------------------------------------

struct IsotropyReport {
  Eigen::MatrixXd covariance;  // empirical E[a a^T] of column a_1
  Eigen::MatrixXd std_error;   // per-entry standard error
  Eigen::VectorXd mean;
  double max_deviation = 0.0;  // max |covariance - I|
  double max_z_diagonal = 0.0;     // max |C_ii - 1| / se
  double max_z_off_diagonal = 0.0;  // max |C_ik| / se
  std::size_t samples = 0;
};

/// Redraws the emitter angle and the sign vector each sample and accumulates
/// second moments of column a_1 of A. Parallel over fixed-size sample blocks;
/// each block has its own generator stream derived from `seed`.
IsotropyReport certify_isotropy(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                std::size_t samples, std::uint64_t seed);
IsotropyReport certify_isotropy_serial(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                       std::size_t samples, std::uint64_t seed);

struct SymmetryReport {
  double mean = 0.0;
  double mean_std_error = 0.0;
  double skewness = 0.0;
  double cdf_symmetry_gap = 0.0;   // sup_x |F(x) - F_{-g}(x)|
  double exchangeability_gap = 0.0;  // max over a 10x10 grid of |F(x,y) - F(y,x)|
  double tolerance = 0.0;          // 3 / sqrt(samples)
  std::size_t samples = 0;
};

/// Distribution of g = lambda_i - lambda_{i+1} for the first diametric pair
/// of `circle`, over uniform emitter angles.
SymmetryReport certify_symmetry_exchangeability(const CircularLayout& layout, std::size_t circle, double offset_k,
                                                std::size_t samples, Rng& rng);

struct PairVariance {
  std::size_t circle = 0;
  std::size_t pair = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double quadrature = 0.0;
};

/// Monte Carlo E[g^2] for every diametric pair, alongside the circle's quadrature value.
std::vector<PairVariance> certify_pair_variances(const CircularLayout& layout, double offset_k, std::size_t samples,
                                                 Rng& rng);

struct NormConvergencePoint {
  std::size_t sensors_per_circle = 0;
  double emitter_angle = 0.0;
  double normalized_norm = 0.0;  // ||a_1||^2 / q
  double deviation = 0.0;        // |normalized_norm - 1|
};

/// Deterministic ||a_1||^2 / q for a single-circle layout with every sensor
/// queried, one point per (sensor count, emitter angle).
std::vector<NormConvergencePoint> certify_norm_convergence(double sensor_radius, double emitter_radius,
                                                           double offset_k, const std::vector<std::size_t>& counts,
                                                           const std::vector<double>& emitter_angles);

/// max over p in 1..10 of (mean |u|^p)^(1/p) / sqrt(p).
double estimate_subgaussian_norm(const std::vector<double>& samples);

struct IndependenceReport {
  double max_entry_correlation = 0.0;
  double max_square_correlation = 0.0;
  std::size_t samples = 0;
};

/// Cross-column correlations of a_{i1} with a_{i2} (and of their squares)
/// over independent emitter draws sharing the row signs.
IndependenceReport certify_column_independence(const CircularLayout& layout, const QuerySet& query,
                                               double offset_k, std::size_t samples, Rng& rng);

/// Samples of a single entry a_{i1} (row `row`) over emitter and sign redraws.
std::vector<double> sample_processed_entries(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                             std::size_t row, std::size_t samples, Rng& rng);

}  // namespace dynsense
