#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dynsense/rng.hpp"

namespace dynsense {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Position in polar coordinates. The angle is kept in [0, 2*pi).
class PolarPosition {
 public:
  PolarPosition() = default;
  PolarPosition(double radius, double angle);

  double radius() const { return radius_; }
  double angle() const { return angle_; }
  Point cartesian() const;

 private:
  double radius_ = 0.0;
  double angle_ = 0.0;
};

double normalize_angle(double angle);

/// Law-of-cosines distance between two polar positions.
double pairwise_distance(const PolarPosition& a, const PolarPosition& b);
double euclidean_distance(const Point& a, const Point& b);

/// 1 / (K + d^2). Throws std::invalid_argument for K <= 0 or d < 0.
double path_loss_gain(double distance, double offset_k);

/// Sensors on concentric circles, numbered so that indices (2i, 2i+1) within a
/// circle are diametrically opposite. Indices are 0-based throughout.
class CircularLayout {
 public:
  static CircularLayout build(std::size_t num_emitters, std::size_t num_sensors, std::size_t num_circles,
                              double emitter_radius, std::span<const double> circle_radii, Rng& rng);

  /// Same sensors, emitters moved to the given angles.
  CircularLayout with_emitter_angles(std::vector<double> angles) const;

  std::size_t num_emitters() const { return emitter_angles_.size(); }
  std::size_t num_sensors() const { return sensors_.size(); }
  std::size_t num_circles() const { return circle_radii_.size(); }
  std::size_t sensors_per_circle() const { return sensors_.size() / circle_radii_.size(); }

  double emitter_radius() const { return emitter_radius_; }
  const std::vector<double>& emitter_angles() const { return emitter_angles_; }
  const std::vector<double>& circle_radii() const { return circle_radii_; }
  const std::vector<PolarPosition>& sensors() const { return sensors_; }
  std::vector<PolarPosition> emitters() const;

  /// Sensor indices of circle c, in diametric-pair order.
  const std::vector<std::size_t>& partition(std::size_t circle) const { return partitions_.at(circle); }
  const std::vector<std::vector<std::size_t>>& partitions() const { return partitions_; }
  std::size_t circle_of(std::size_t sensor) const { return sensor_circle_.at(sensor); }

 private:
  double emitter_radius_ = 1.0;
  std::vector<double> emitter_angles_;
  std::vector<double> circle_radii_;
  std::vector<PolarPosition> sensors_;
  std::vector<std::vector<std::size_t>> partitions_;
  std::vector<std::size_t> sensor_circle_;
};

/// Square region split into N = n*n cells, indexed column-wise. One potential
/// emitter at each cell center and one sensor per cell at a fixed offset.
class GridLayout {
 public:
  /// Sensor offsets drawn uniformly inside each cell, once.
  static GridLayout build(std::size_t num_cells, double side, Rng& rng);
  /// Sensors placed at the cell centers.
  static GridLayout centered(std::size_t num_cells, double side);

  std::size_t num_cells() const { return emitters_.size(); }
  std::size_t cells_per_side() const { return per_side_; }
  double side() const { return side_; }
  double cell_size() const { return side_ / static_cast<double>(per_side_); }
  const std::vector<Point>& emitters() const { return emitters_; }
  const std::vector<Point>& sensors() const { return sensors_; }

  /// Center of cell `index` (column-wise, 0-based).
  Point cell_center(std::size_t index) const;

 private:
  GridLayout(std::size_t num_cells, double side);

  std::size_t per_side_ = 1;
  double side_ = 1.0;
  std::vector<Point> emitters_;
  std::vector<Point> sensors_;
};

/// Gains lambda(m, n) between sensor m (row) and emitter n (column).
struct PathLossMatrix {
  Eigen::MatrixXd gains;
  double offset_k = 1.0;

  std::size_t num_sensors() const { return static_cast<std::size_t>(gains.rows()); }
  std::size_t num_emitters() const { return static_cast<std::size_t>(gains.cols()); }

  /// Submatrix formed by the given sensor rows, in order.
  Eigen::MatrixXd rows(std::span<const std::size_t> sensors) const;
};

PathLossMatrix build_path_loss_matrix(const CircularLayout& layout, double offset_k);
PathLossMatrix build_path_loss_matrix(const GridLayout& layout, double offset_k);

void write_layout_csv(std::ostream& out, const CircularLayout& layout);
void write_layout_csv(std::ostream& out, const GridLayout& layout);

}  // namespace dynsense
