#include "dynsense/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace dynsense {

namespace {
std::vector<bool> membership(std::span<const std::size_t> set, std::size_t universe) {
  std::vector<bool> in(universe, false);
  for (auto i : set) {
    if (i >= universe) throw std::out_of_range("set_distance: index outside the universe");
    in[i] = true;
  }
  return in;
}
}  // namespace

double set_distance(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t universe) {
  if (universe == 0) throw std::invalid_argument("set_distance: empty universe");
  const auto in_a = membership(a, universe);
  const auto in_b = membership(b, universe);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < universe; ++i) agree += in_a[i] == in_b[i] ? 1 : 0;
  return 1.0 - static_cast<double>(agree) / static_cast<double>(universe);
}

double average_distance(std::span<const double> distances) {
  if (distances.empty()) throw std::invalid_argument("average_distance: no windows");
  return std::accumulate(distances.begin(), distances.end(), 0.0) / static_cast<double>(distances.size());
}

BandwidthReport bandwidth(std::size_t dynamics_windows, std::size_t partial_reset_windows,
                          std::size_t full_reset_windows, std::size_t q, std::size_t q_extra, std::size_t num_sensors) {
  const std::size_t total = dynamics_windows + partial_reset_windows + full_reset_windows;
  if (total == 0) throw std::invalid_argument("bandwidth: no windows counted");
  if (num_sensors == 0) throw std::invalid_argument("bandwidth: no sensors");
  if (q + q_extra > num_sensors) throw std::invalid_argument("bandwidth: q + q' exceeds the number of sensors");
  const double frac = static_cast<double>(dynamics_windows) / static_cast<double>(total);
  const auto n = static_cast<double>(num_sensors);
  BandwidthReport r;
  r.bandwidth = frac * static_cast<double>(q + q_extra) + n * (1.0 - frac);
  r.savings = 1.0 - r.bandwidth / n;
  return r;
}

}  // namespace dynsense
