#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "dynsense/query.hpp"

using namespace dynsense;

namespace {

CircularLayout fig_layout(std::size_t sensors = 8, std::size_t circles = 2) {
  Rng rng(1);
  std::vector<double> radii;
  for (std::size_t c = 0; c < circles; ++c) radii.push_back(0.5 + static_cast<double>(c));
  return CircularLayout::build(2, sensors, circles, 1.0, radii, rng);
}

bool distinct(const QuerySet& q) {
  return std::set<std::size_t>(q.indices.begin(), q.indices.end()).size() == q.size();
}

}  // namespace

TEST_CASE("two-circle layout with q = 4") {
  const auto layout = fig_layout();
  CHECK(is_pair_structured(layout, QuerySet{{0, 1, 6, 7}}));
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 64 && !seen; ++seed) {
    Rng rng(seed);
    const auto q = select_query_circular(layout, 4, rng);
    REQUIRE(is_pair_structured(layout, q));
    // Step 0 draws from circle 1, step 1 from circle 2.
    CHECK(layout.circle_of(q.indices[0]) == 0);
    CHECK(layout.circle_of(q.indices[2]) == 1);
    std::vector<std::size_t> sorted = q.indices;
    std::sort(sorted.begin(), sorted.end());
    seen = sorted == std::vector<std::size_t>{0, 1, 6, 7};
  }
  CHECK(seen);
}

TEST_CASE("full and minimal circular queries") {
  const auto layout = fig_layout();
  Rng rng(2);
  auto all = select_query_circular(layout, 8, rng);
  std::sort(all.indices.begin(), all.indices.end());
  CHECK(all.indices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});

  const auto one = select_query_circular(layout, 2, rng);
  REQUIRE(one.size() == 2);
  CHECK(layout.circle_of(one.indices[0]) == 0);
  CHECK(is_pair_structured(layout, one));
}

TEST_CASE("circular query errors") {
  const auto layout = fig_layout();
  Rng rng(3);
  CHECK_THROWS_AS(select_query_circular(layout, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(select_query_circular(layout, 10, rng), std::invalid_argument);
  // Three circles of four sensors: every pair gets consumed.
  const auto three = fig_layout(12, 3);
  CHECK_NOTHROW(select_query_circular(three, 12, rng));
}

TEST_CASE("round-robin balance and pair structure on random draws") {
  const auto layout = fig_layout(48, 3);
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const std::size_t q = 2 * (1 + static_cast<std::size_t>(t % 24));
    const auto query = select_query_circular(layout, q, rng);
    CHECK(query.size() == q);
    CHECK(is_pair_structured(layout, query));
    CHECK(distinct(query));
    std::vector<std::size_t> per_circle(3, 0);
    for (std::size_t i = 0; i < q; i += 2) ++per_circle[layout.circle_of(query.indices[i])];
    const auto [lo, hi] = std::minmax_element(per_circle.begin(), per_circle.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("pair structure detection rejects broken sets") {
  const auto layout = fig_layout();
  CHECK_FALSE(is_pair_structured(layout, QuerySet{{0, 2}}));
  CHECK_FALSE(is_pair_structured(layout, QuerySet{{1, 2}}));
  CHECK_FALSE(is_pair_structured(layout, QuerySet{{0}}));
  CHECK_FALSE(is_pair_structured(layout, QuerySet{{0, 1, 0, 1}}));
  CHECK_FALSE(is_pair_structured(layout, QuerySet{{3, 4}}));
}

TEST_CASE("grid queries") {
  const auto q = select_query_grid(49, 29);
  REQUIRE(q.size() == 29);
  for (std::size_t i = 0; i < 29; ++i) CHECK(q.indices[i] == i);
  CHECK(select_query_grid(49, 0).size() == 0);
  CHECK(select_query_grid(49, 49).size() == 49);
  CHECK_THROWS_AS(select_query_grid(49, 50), std::invalid_argument);

  const auto extra = select_extra_grid(49, q, 5);
  CHECK(extra.indices == std::vector<std::size_t>{29, 30, 31, 32, 33});
  CHECK(select_extra_grid(49, q, 0).size() == 0);
  CHECK_THROWS_AS(select_extra_grid(49, select_query_grid(49, 49), 1), std::invalid_argument);
}

TEST_CASE("random extra sets avoid the primary set") {
  const auto layout = fig_layout(32, 2);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto primary = select_query_circular(layout, 8, rng);
    const auto extra = select_extra_random(32, primary, 5, rng);
    CHECK(extra.size() == 5);
    CHECK(distinct(extra));
    for (auto i : extra.indices) {
      CHECK(i < 32);
      CHECK_FALSE(primary.contains(i));
    }
  }
  CHECK(select_extra_random(32, QuerySet{}, 0, rng).size() == 0);
  const auto all = select_query_grid(8, 8);
  CHECK_THROWS_AS(select_extra_random(8, all, 1, rng), std::invalid_argument);
}
