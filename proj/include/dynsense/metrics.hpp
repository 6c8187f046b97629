#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dynsense {

/// 1 - (|A & B| + |A^c & B^c|) / N over index sets in [0, N).
double set_distance(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t universe);

double average_distance(std::span<const double> distances);

struct BandwidthReport {
  double bandwidth = 0.0;
  double savings = 0.0;  // 1 - B / N
};

/// Time-averaged number of control channels: (T_d/T)(q+q') + N(1 - T_d/T).
BandwidthReport bandwidth(std::size_t dynamics_windows, std::size_t partial_reset_windows,
                          std::size_t full_reset_windows, std::size_t q, std::size_t q_extra, std::size_t num_sensors);

}  // namespace dynsense
