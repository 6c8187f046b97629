#include "dynsense/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dynsense {

double normalize_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // fmod of a value just below 0 can round back up to 2*pi.
  if (a >= kTwoPi) a = 0.0;
  return a;
}

PolarPosition::PolarPosition(double radius, double angle) : radius_(radius), angle_(normalize_angle(angle)) {
  if (!(radius >= 0.0)) throw std::invalid_argument("PolarPosition: radius must be non-negative");
}

Point PolarPosition::cartesian() const { return {radius_ * std::cos(angle_), radius_ * std::sin(angle_)}; }

double pairwise_distance(const PolarPosition& a, const PolarPosition& b) {
  const double sq = a.radius() * a.radius() + b.radius() * b.radius() -
                    2.0 * a.radius() * b.radius() * std::cos(a.angle() - b.angle());
  return std::sqrt(std::max(sq, 0.0));
}

double euclidean_distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss_gain(double distance, double offset_k) {
  if (!(offset_k > 0.0)) throw std::invalid_argument("path_loss_gain: K must be positive");
  if (!(distance >= 0.0)) throw std::invalid_argument("path_loss_gain: distance must be non-negative");
  return 1.0 / (offset_k + distance * distance);
}

CircularLayout CircularLayout::build(std::size_t num_emitters, std::size_t num_sensors, std::size_t num_circles,
                                     double emitter_radius, std::span<const double> circle_radii, Rng& rng) {
  if (num_emitters == 0) throw std::invalid_argument("circular layout: need at least one emitter");
  if (num_circles == 0) throw std::invalid_argument("circular layout: need at least one circle");
  if (circle_radii.size() != num_circles)
    throw std::invalid_argument("circular layout: expected " + std::to_string(num_circles) + " radii, got " +
                                std::to_string(circle_radii.size()));
  if (num_sensors < num_emitters)
    throw std::invalid_argument("circular layout: number of sensors must be >= number of emitters");
  if (num_sensors % num_circles != 0)
    throw std::invalid_argument("circular layout: number of sensors must be divisible by the number of circles");
  if ((num_sensors / num_circles) % 2 != 0)
    throw std::invalid_argument("circular layout: sensors per circle must be even");
  if (!(emitter_radius >= 0.0)) throw std::invalid_argument("circular layout: emitter radius must be non-negative");
  for (std::size_t c = 0; c < circle_radii.size(); ++c) {
    if (!(circle_radii[c] > 0.0)) throw std::invalid_argument("circular layout: circle radii must be positive");
    for (std::size_t d = 0; d < c; ++d)
      if (circle_radii[c] == circle_radii[d]) throw std::invalid_argument("circular layout: circle radii must be distinct");
  }

  CircularLayout layout;
  layout.emitter_radius_ = emitter_radius;
  layout.circle_radii_.assign(circle_radii.begin(), circle_radii.end());

  const std::size_t per_circle = num_sensors / num_circles;
  const std::size_t pairs = per_circle / 2;
  layout.sensors_.reserve(num_sensors);
  layout.partitions_.resize(num_circles);
  for (std::size_t c = 0; c < num_circles; ++c) {
    for (std::size_t i = 0; i < pairs; ++i) {
      const double base = kTwoPi * static_cast<double>(i) / static_cast<double>(per_circle);
      for (double angle : {base, base + kPi}) {
        layout.partitions_[c].push_back(layout.sensors_.size());
        layout.sensor_circle_.push_back(c);
        layout.sensors_.emplace_back(circle_radii[c], angle);
      }
    }
  }

  std::uniform_real_distribution<double> uniform_angle(0.0, kTwoPi);
  layout.emitter_angles_.resize(num_emitters);
  for (auto& a : layout.emitter_angles_) a = normalize_angle(uniform_angle(rng));
  return layout;
}

CircularLayout CircularLayout::with_emitter_angles(std::vector<double> angles) const {
  if (angles.empty()) throw std::invalid_argument("circular layout: need at least one emitter");
  CircularLayout out = *this;
  for (auto& a : angles) a = normalize_angle(a);
  out.emitter_angles_ = std::move(angles);
  return out;
}

std::vector<PolarPosition> CircularLayout::emitters() const {
  std::vector<PolarPosition> out;
  out.reserve(emitter_angles_.size());
  for (double a : emitter_angles_) out.emplace_back(emitter_radius_, a);
  return out;
}

GridLayout::GridLayout(std::size_t num_cells, double side) : side_(side) {
  if (num_cells == 0) throw std::invalid_argument("grid layout: number of cells must be positive");
  if (!(side > 0.0)) throw std::invalid_argument("grid layout: side must be positive");
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(num_cells))));
  if (root * root != num_cells)
    throw std::invalid_argument("grid layout: number of cells must be a perfect square, got " +
                                std::to_string(num_cells));
  per_side_ = root;
  emitters_.reserve(num_cells);
  for (std::size_t i = 0; i < num_cells; ++i) emitters_.push_back(cell_center(i));
}

Point GridLayout::cell_center(std::size_t index) const {
  const double size = cell_size();
  const auto column = static_cast<double>(index / per_side_);
  const auto row = static_cast<double>(index % per_side_);
  return {(column + 0.5) * size, (row + 0.5) * size};
}

GridLayout GridLayout::build(std::size_t num_cells, double side, Rng& rng) {
  GridLayout layout(num_cells, side);
  const double size = layout.cell_size();
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  layout.sensors_.reserve(num_cells);
  for (std::size_t i = 0; i < num_cells; ++i) {
    const double column = static_cast<double>(i / layout.per_side_);
    const double row = static_cast<double>(i % layout.per_side_);
    const double dx = offset(rng);
    const double dy = offset(rng);
    layout.sensors_.push_back({(column + dx) * size, (row + dy) * size});
  }
  return layout;
}

GridLayout GridLayout::centered(std::size_t num_cells, double side) {
  GridLayout layout(num_cells, side);
  layout.sensors_ = layout.emitters_;
  return layout;
}

Eigen::MatrixXd PathLossMatrix::rows(std::span<const std::size_t> sensors) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(sensors.size()), gains.cols());
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (sensors[i] >= num_sensors()) throw std::out_of_range("PathLossMatrix::rows: sensor index out of range");
    out.row(static_cast<Eigen::Index>(i)) = gains.row(static_cast<Eigen::Index>(sensors[i]));
  }
  return out;
}

PathLossMatrix build_path_loss_matrix(const CircularLayout& layout, double offset_k) {
  const auto emitters = layout.emitters();
  const auto& sensors = layout.sensors();
  PathLossMatrix out;
  out.offset_k = offset_k;
  out.gains.resize(static_cast<Eigen::Index>(sensors.size()), static_cast<Eigen::Index>(emitters.size()));
  for (std::size_t m = 0; m < sensors.size(); ++m)
    for (std::size_t n = 0; n < emitters.size(); ++n)
      out.gains(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
          path_loss_gain(pairwise_distance(sensors[m], emitters[n]), offset_k);
  return out;
}

PathLossMatrix build_path_loss_matrix(const GridLayout& layout, double offset_k) {
  const auto& emitters = layout.emitters();
  const auto& sensors = layout.sensors();
  PathLossMatrix out;
  out.offset_k = offset_k;
  out.gains.resize(static_cast<Eigen::Index>(sensors.size()), static_cast<Eigen::Index>(emitters.size()));
  for (std::size_t m = 0; m < sensors.size(); ++m)
    for (std::size_t n = 0; n < emitters.size(); ++n)
      out.gains(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
          path_loss_gain(euclidean_distance(sensors[m], emitters[n]), offset_k);
  return out;
}

void write_layout_csv(std::ostream& out, const CircularLayout& layout) {
  out << "index,x,y,kind\n";
  const auto emitters = layout.emitters();
  for (std::size_t i = 0; i < emitters.size(); ++i) {
    const auto p = emitters[i].cartesian();
    out << i + 1 << ',' << p.x << ',' << p.y << ",emitter\n";
  }
  for (std::size_t i = 0; i < layout.sensors().size(); ++i) {
    const auto p = layout.sensors()[i].cartesian();
    out << i + 1 << ',' << p.x << ',' << p.y << ",sensor\n";
  }
}

void write_layout_csv(std::ostream& out, const GridLayout& layout) {
  out << "index,x,y,kind\n";
  for (std::size_t i = 0; i < layout.num_cells(); ++i)
    out << i + 1 << ',' << layout.emitters()[i].x << ',' << layout.emitters()[i].y << ",emitter\n";
  for (std::size_t i = 0; i < layout.num_cells(); ++i)
    out << i + 1 << ',' << layout.sensors()[i].x << ',' << layout.sensors()[i].y << ",sensor\n";
}

}  // namespace dynsense
