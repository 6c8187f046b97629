#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynsense/geometry.hpp"

using namespace dynsense;
using Catch::Approx;

TEST_CASE("pairwise distance examples") {
  CHECK(pairwise_distance({1, 0}, {1, 0}) == Approx(0.0).margin(1e-15));
  CHECK(pairwise_distance({1, 0}, {1, kPi}) == Approx(2.0));
  CHECK(pairwise_distance({3, kPi / 2}, {4, 0}) == Approx(5.0));
}

TEST_CASE("pairwise distance is symmetric and obeys the triangle inequality") {
  Rng rng(7);
  std::uniform_real_distribution<double> r(0.0, 3.0);
  std::uniform_real_distribution<double> a(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const PolarPosition p(r(rng), a(rng)), q(r(rng), a(rng)), s(r(rng), a(rng));
    CHECK(pairwise_distance(p, q) == Approx(pairwise_distance(q, p)));
    CHECK(pairwise_distance(p, s) <= pairwise_distance(p, q) + pairwise_distance(q, s) + 1e-12);
    CHECK(pairwise_distance(p, q) == Approx(euclidean_distance(p.cartesian(), q.cartesian())).margin(1e-12));
  }
}

TEST_CASE("angles are normalized into [0, 2pi)") {
  for (double angle : {-7.0, -kPi, 0.0, kTwoPi, 3 * kTwoPi + 0.25, 100.0}) {
    const PolarPosition p(1.0, angle);
    CHECK(p.angle() >= 0.0);
    CHECK(p.angle() < kTwoPi);
  }
  CHECK_THROWS_AS(PolarPosition(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("path loss gain examples") {
  CHECK(path_loss_gain(0.0, 1.0) == 1.0);
  CHECK(path_loss_gain(2.0, 1.0) == Approx(0.2));
  CHECK(path_loss_gain(3.0, 1.0) == Approx(0.1));
  CHECK(path_loss_gain(0.0, 4.0) == 0.25);
  CHECK(path_loss_gain(1.0, 1.0) > path_loss_gain(1.5, 1.0));
  CHECK_THROWS_AS(path_loss_gain(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(path_loss_gain(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(path_loss_gain(-0.5, 1.0), std::invalid_argument);
}

TEST_CASE("circular layout partitions and diametric pairs") {
  Rng rng(1);
  const std::vector<double> radii{0.6, 1.4};
  const auto layout = CircularLayout::build(4, 8, 2, 1.0, radii, rng);
  REQUIRE(layout.partitions().size() == 2);
  CHECK(layout.partition(0) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(layout.partition(1) == std::vector<std::size_t>{4, 5, 6, 7});
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& part = layout.partition(c);
    for (std::size_t j = 0; j < part.size(); j += 2) {
      const auto& a = layout.sensors()[part[j]];
      const auto& b = layout.sensors()[part[j + 1]];
      CHECK(a.radius() == radii[c]);
      CHECK(b.radius() == radii[c]);
      CHECK(pairwise_distance(a, b) == Approx(2.0 * radii[c]));
    }
  }
  for (double a : layout.emitter_angles()) {
    CHECK(a >= 0.0);
    CHECK(a < kTwoPi);
  }
}

TEST_CASE("single diametric pair") {
  Rng rng(2);
  const std::vector<double> radii{1.5};
  const auto layout = CircularLayout::build(1, 2, 1, 1.0, radii, rng);
  const auto& s = layout.sensors();
  CHECK(std::abs(normalize_angle(s[1].angle() - s[0].angle()) - kPi) < 1e-15);
}

TEST_CASE("circular layout rejects invalid shapes") {
  Rng rng(3);
  const std::vector<double> two{0.6, 1.4};
  const std::vector<double> three{0.6, 1.4, 2.0};
  CHECK_THROWS_AS(CircularLayout::build(4, 8, 3, 1.0, three, rng), std::invalid_argument);
  CHECK_THROWS_AS(CircularLayout::build(2, 6, 2, 1.0, two, rng), std::invalid_argument);
  CHECK_THROWS_AS(CircularLayout::build(10, 8, 2, 1.0, two, rng), std::invalid_argument);
  const std::vector<double> same{1.0, 1.0};
  CHECK_THROWS_AS(CircularLayout::build(2, 8, 2, 1.0, same, rng), std::invalid_argument);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(CircularLayout::build(2, 8, 2, 1.0, one, rng), std::invalid_argument);
}

TEST_CASE("circular sensors are deterministic and emitters depend on the generator") {
  const std::vector<double> radii{0.6, 1.4};
  Rng a(11), b(11), c(12);
  const auto la = CircularLayout::build(16, 32, 2, 1.0, radii, a);
  const auto lb = CircularLayout::build(16, 32, 2, 1.0, radii, b);
  const auto lc = CircularLayout::build(16, 32, 2, 1.0, radii, c);
  CHECK(la.emitter_angles() == lb.emitter_angles());
  CHECK(la.emitter_angles() != lc.emitter_angles());
  for (std::size_t i = 0; i < la.num_sensors(); ++i) {
    CHECK(la.sensors()[i].angle() == lc.sensors()[i].angle());
    CHECK(la.sensors()[i].radius() == lc.sensors()[i].radius());
  }
}

TEST_CASE("grid layout geometry") {
  Rng rng(4);
  const auto grid = GridLayout::build(49, 7.0, rng);
  CHECK(grid.cells_per_side() == 7);
  CHECK(grid.cell_size() == Approx(1.0));
  CHECK(grid.emitters()[0].x == Approx(0.5));
  CHECK(grid.emitters()[0].y == Approx(0.5));
  // Column-wise: cell 2 sits above cell 1, cell 8 starts the second column.
  CHECK(grid.emitters()[1].x == Approx(0.5));
  CHECK(grid.emitters()[1].y == Approx(1.5));
  CHECK(grid.emitters()[7].x == Approx(1.5));
  CHECK(grid.emitters()[7].y == Approx(0.5));
  for (std::size_t i = 0; i < grid.num_cells(); ++i) {
    const Point c = grid.cell_center(i);
    const Point s = grid.sensors()[i];
    CHECK(std::abs(s.x - c.x) <= 0.5);
    CHECK(std::abs(s.y - c.y) <= 0.5);
    CHECK(s.x >= 0.0);
    CHECK(s.y <= 7.0);
  }

  const auto single = GridLayout::build(1, 3.0, rng);
  CHECK(single.emitters()[0].x == Approx(1.5));
  CHECK(single.emitters()[0].y == Approx(1.5));

  CHECK_THROWS_AS(GridLayout::build(50, 7.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(GridLayout::build(0, 7.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(GridLayout::build(49, 0.0, rng), std::invalid_argument);
}

TEST_CASE("path loss matrix entries") {
  SECTION("coincident sensor and emitter") {
    const auto grid = GridLayout::centered(1, 1.0);
    const auto pl = build_path_loss_matrix(grid, 1.0);
    CHECK(pl.gains(0, 0) == 1.0);
  }
  SECTION("centered 2x2 grid is symmetric") {
    const auto pl = build_path_loss_matrix(GridLayout::centered(4, 2.0), 1.0);
    CHECK(pl.gains.isApprox(pl.gains.transpose()));
    auto sorted_row = [&](Eigen::Index m) {
      const Eigen::VectorXd row = pl.gains.row(m).transpose();
      std::vector<double> out(row.data(), row.data() + row.size());
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto first = sorted_row(0);
    for (Eigen::Index m = 0; m < 4; ++m) {
      const auto sorted = sorted_row(m);
      for (std::size_t j = 0; j < 4; ++j) CHECK(sorted[j] == Approx(first[j]));
      CHECK(pl.gains(m, m) == 1.0);
    }
  }
  SECTION("circular entries match scalar recomputation") {
    Rng rng(5);
    const std::vector<double> radii{0.7};
    const auto layout = CircularLayout::build(2, 4, 1, 1.0, radii, rng);
    const double k = 1.3;
    const auto pl = build_path_loss_matrix(layout, k);
    REQUIRE(pl.gains.rows() == 4);
    REQUIRE(pl.gains.cols() == 2);
    const auto emitters = layout.emitters();
    for (std::size_t m = 0; m < 4; ++m)
      for (std::size_t n = 0; n < 2; ++n) {
        const Point s = layout.sensors()[m].cartesian();
        const Point e = emitters[n].cartesian();
        const double d2 = (s.x - e.x) * (s.x - e.x) + (s.y - e.y) * (s.y - e.y);
        CHECK(pl.gains(m, n) == Approx(1.0 / (k + d2)).epsilon(1e-13));
      }
  }
}

TEST_CASE("path loss entries lie in (0, 1/K]") {
  Rng rng(6);
  const auto grid = GridLayout::build(49, 7.0, rng);
  for (double k : {0.5, 1.0, 2.0}) {
    const auto pl = build_path_loss_matrix(grid, k);
    CHECK(pl.gains.minCoeff() > 0.0);
    CHECK(pl.gains.maxCoeff() <= 1.0 / k);
  }
}

TEST_CASE("sensors of one circle see identically distributed gains") {
  Rng rng(8);
  const std::vector<double> radii{0.6, 1.4};
  const auto base = CircularLayout::build(1, 16, 2, 1.0, radii, rng);
  const int draws = 20000;
  const std::size_t m = base.num_sensors();
  std::vector<double> sum(m, 0.0), sum_sq(m, 0.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int t = 0; t < draws; ++t) {
    const auto layout = base.with_emitter_angles({angle(rng)});
    const auto pl = build_path_loss_matrix(layout, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = pl.gains(static_cast<Eigen::Index>(i), 0);
      sum[i] += v;
      sum_sq[i] += v * v;
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& part = base.partition(c);
    double pooled = 0.0;
    for (auto i : part) pooled += sum[i] / draws;
    pooled /= static_cast<double>(part.size());
    for (auto i : part) {
      const double mean = sum[i] / draws;
      const double se = std::sqrt((sum_sq[i] / draws - mean * mean) / draws);
      CHECK(std::abs(mean - pooled) <= 3.0 * se);
    }
  }
}
