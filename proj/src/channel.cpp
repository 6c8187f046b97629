#include "dynsense/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dynsense {

Fidelity parse_fidelity(std::string_view name) {
  if (name == "samples") return Fidelity::Samples;
  if (name == "surrogate") return Fidelity::Surrogate;
  if (name == "noiseless") return Fidelity::Noiseless;
  throw std::invalid_argument("unknown channel fidelity '" + std::string(name) +
                              "' (expected samples, surrogate or noiseless)");
}

std::string_view to_string(Fidelity f) {
  switch (f) {
    case Fidelity::Samples: return "samples";
    case Fidelity::Surrogate: return "surrogate";
    case Fidelity::Noiseless: return "noiseless";
  }
  return "?";
}

namespace {

void check_inputs(const PathLossMatrix& gains, const SignalState& state, int window_length, double noise_var) {
  if (window_length < 1) throw std::invalid_argument("measurement window length must be >= 1");
  if (!(noise_var >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  if (state.size() != gains.num_emitters())
    throw std::invalid_argument("signal length does not match the number of emitters");
}

// Per-sensor amplitudes sqrt(lambda_mn * s_n) over the active emitters.
std::vector<double> active_amplitudes(const PathLossMatrix& gains, const SignalState& state, Eigen::Index m) {
  std::vector<double> amps;
  for (std::size_t n = 0; n < state.size(); ++n)
    if (state.is_on(n)) amps.push_back(std::sqrt(gains.gains(m, static_cast<Eigen::Index>(n)) * state.power()));
  return amps;
}

double sensor_window_power(const std::vector<double>& amps, int window_length, double noise_var, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const double noise_scale = std::sqrt(noise_var);
  double acc = 0.0;
  for (int t = 0; t < window_length; ++t) {
    double re = 0.0;
    double im = 0.0;
    for (double a : amps) {
      re += a * gauss(rng);
      im += a * gauss(rng);
    }
    re += noise_scale * gauss(rng);
    im += noise_scale * gauss(rng);
    acc += re * re + im * im;
  }
  return acc / static_cast<double>(window_length) - noise_var;
}

MeasurementFrame make_frame(const SignalState& state, int window_length, double noise_var, Eigen::Index rows) {
  MeasurementFrame frame;
  frame.z = Eigen::VectorXd::Zero(rows);
  frame.window = state.window();
  frame.window_length = window_length;
  frame.noise_var = noise_var;
  return frame;
}

}  // namespace

MeasurementFrame measure_window_samples_serial(const PathLossMatrix& gains, const SignalState& state,
                                               int window_length, double noise_var, std::uint64_t stream_seed) {
  check_inputs(gains, state, window_length, noise_var);
  const Eigen::Index rows = gains.gains.rows();
  MeasurementFrame frame = make_frame(state, window_length, noise_var, rows);
  for (Eigen::Index m = 0; m < rows; ++m) {
    Rng rng = make_stream(stream_seed, static_cast<std::uint64_t>(m));
    frame.z(m) = sensor_window_power(active_amplitudes(gains, state, m), window_length, noise_var, rng);
  }
  return frame;
}

MeasurementFrame measure_window_samples(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                        double noise_var, std::uint64_t stream_seed) {
  check_inputs(gains, state, window_length, noise_var);
  const Eigen::Index rows = gains.gains.rows();
  MeasurementFrame frame = make_frame(state, window_length, noise_var, rows);
#pragma omp parallel for schedule(static)
  for (Eigen::Index m = 0; m < rows; ++m) {
    Rng rng = make_stream(stream_seed, static_cast<std::uint64_t>(m));
    frame.z(m) = sensor_window_power(active_amplitudes(gains, state, m), window_length, noise_var, rng);
  }
  return frame;
}

MeasurementFrame measure_window_samples(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                        double noise_var, Rng& rng) {
  return measure_window_samples(gains, state, window_length, noise_var, rng());
}

MeasurementFrame measure_window_surrogate(const PathLossMatrix& gains, const SignalState& state, int window_length,
                                          double noise_var, Rng& rng, double calibration) {
  check_inputs(gains, state, window_length, noise_var);
  if (!(calibration >= 0.0)) throw std::invalid_argument("surrogate calibration must be non-negative");
  MeasurementFrame frame = make_frame(state, window_length, noise_var, gains.gains.rows());
  const Eigen::VectorXd mean = gains.gains * state.values();
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = std::sqrt(calibration / static_cast<double>(window_length));
  for (Eigen::Index m = 0; m < mean.size(); ++m) frame.z(m) = mean(m) + (mean(m) + noise_var) * scale * gauss(rng);
  return frame;
}

MeasurementFrame measure_window_noiseless(const PathLossMatrix& gains, const SignalState& state) {
  check_inputs(gains, state, 1, 0.0);
  MeasurementFrame frame = make_frame(state, 1, 0.0, gains.gains.rows());
  frame.z = gains.gains * state.values();
  return frame;
}

MeasurementFrame measure_window(Fidelity fidelity, const PathLossMatrix& gains, const SignalState& state,
                                int window_length, double noise_var, Rng& rng) {
  switch (fidelity) {
    case Fidelity::Samples: return measure_window_samples(gains, state, window_length, noise_var, rng);
    case Fidelity::Surrogate: return measure_window_surrogate(gains, state, window_length, noise_var, rng);
    case Fidelity::Noiseless: {
      MeasurementFrame f = measure_window_noiseless(gains, state);
      f.window_length = window_length;
      return f;
    }
  }
  throw std::logic_error("measure_window: unhandled fidelity");
}

Eigen::VectorXd difference_frames(const MeasurementFrame& a, const MeasurementFrame& b) {
  if (a.z.size() != b.z.size()) throw std::invalid_argument("difference_frames: frame length mismatch");
  return a.z - b.z;
}

void write_frame_csv(std::ostream& out, const MeasurementFrame& frame, bool header) {
  if (header) out << "k,sensor,z\n";
  for (Eigen::Index m = 0; m < frame.z.size(); ++m) out << frame.window << ',' << m + 1 << ',' << frame.z(m) << '\n';
}

}  // namespace dynsense
