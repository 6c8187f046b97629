#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include <Eigen/Dense>

#include "dynsense/geometry.hpp"
#include "dynsense/rng.hpp"
#include "dynsense/signal.hpp"

namespace dynsense {

enum class Fidelity { Samples, Surrogate, Noiseless };

Fidelity parse_fidelity(std::string_view name);
std::string_view to_string(Fidelity f);

/// One sensing window of power measurements, one entry per sensor.
struct MeasurementFrame {
  Eigen::VectorXd z;
  std::int64_t window = 0;
  int window_length = 1;
  double noise_var = 0.0;
};

/// Slot-level synthesis. Each slot draws r_m = sum_n g_mn sqrt(lambda_mn s_n) + v_m
/// with g ~ CN(0,1), v ~ CN(0, noise_var); z_m = mean |r_m|^2 - noise_var.
/// Sensor m uses generator stream (stream_seed, m), so the OpenMP and serial
/// versions produce identical frames.
MeasurementFrame measure_window_samples(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                        double noise_var, std::uint64_t stream_seed);
MeasurementFrame measure_window_samples_serial(const PathLossMatrix& gains, const SignalState& state,
                                               int window_length, double noise_var, std::uint64_t stream_seed);

/// Convenience overload: draws the stream seed from `rng`.
MeasurementFrame measure_window_samples(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                        double noise_var, Rng& rng);

/// z = Lambda s + beta, beta_m ~ N(0, ((Lambda s)_m + noise_var)^2 * calibration / W).
MeasurementFrame measure_window_surrogate(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                          double noise_var, Rng& rng, double calibration = 1.0);

/// z = Lambda s exactly.
MeasurementFrame measure_window_noiseless(const PathLossMatrix& gains, const SignalState& state);

MeasurementFrame measure_window(Fidelity fidelity, const PathLossMatrix& gains, const SignalState& state,
                                int window_length, double noise_var, Rng& rng);

/// Elementwise a.z - b.z.
Eigen::VectorXd difference_frames(const MeasurementFrame& a, const MeasurementFrame& b);

/// Rows (k, sensor, z) with 1-based sensor index.
void write_frame_csv(std::ostream& out, const MeasurementFrame& frame, bool header);

}  // namespace dynsense
