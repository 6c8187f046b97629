#include "dynsense/query.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dynsense {

bool QuerySet::contains(std::size_t sensor) const {
  return std::find(indices.begin(), indices.end(), sensor) != indices.end();
}

QuerySet select_query_circular(const CircularLayout& layout, std::size_t q, Rng& rng) {
  if (q % 2 != 0) throw std::invalid_argument("circular query size must be even, got " + std::to_string(q));
  if (q > layout.num_sensors())
    throw std::invalid_argument("query size " + std::to_string(q) + " exceeds the number of sensors");

  const std::size_t circles = layout.num_circles();
  // Pair p of circle c is (partition[2p], partition[2p+1]).
  std::vector<std::vector<std::size_t>> remaining(circles);
  for (std::size_t c = 0; c < circles; ++c) {
    remaining[c].resize(layout.partition(c).size() / 2);
    std::iota(remaining[c].begin(), remaining[c].end(), std::size_t{0});
  }

  QuerySet out;
  std::size_t circle = 0;
  for (std::size_t step = 0; step < q / 2; ++step) {
    auto& pool = remaining[circle];
    if (pool.empty()) throw std::invalid_argument("query size exceeds available diametric pairs");
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t slot = pick(rng);
    const std::size_t pair = pool[slot];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(slot));
    const auto& part = layout.partition(circle);
    out.indices.push_back(part[2 * pair]);
    out.indices.push_back(part[2 * pair + 1]);
    circle = (circle + 1) % circles;
  }
  return out;
}

QuerySet select_query_grid(std::size_t num_cells, std::size_t q) {
  if (q > num_cells)
    throw std::invalid_argument("query size " + std::to_string(q) + " exceeds the number of cells " +
                                std::to_string(num_cells));
  QuerySet out;
  out.indices.resize(q);
  std::iota(out.indices.begin(), out.indices.end(), std::size_t{0});
  return out;
}

QuerySet select_extra_grid(std::size_t num_cells, const QuerySet& used, std::size_t q_extra) {
  const std::size_t start =
      used.indices.empty() ? 0 : *std::max_element(used.indices.begin(), used.indices.end()) + 1;
  if (start + q_extra > num_cells)
    throw std::invalid_argument("not enough remaining sensors for " + std::to_string(q_extra) + " extra queries");
  QuerySet out;
  out.indices.resize(q_extra);
  std::iota(out.indices.begin(), out.indices.end(), start);
  return out;
}

QuerySet select_extra_random(std::size_t num_sensors, const QuerySet& used, std::size_t q_extra, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < num_sensors; ++i)
    if (!used.contains(i)) pool.push_back(i);
  if (q_extra > pool.size())
    throw std::invalid_argument("not enough remaining sensors for " + std::to_string(q_extra) + " extra queries");
  // Partial Fisher-Yates.
  QuerySet out;
  for (std::size_t i = 0; i < q_extra; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.indices.push_back(pool[i]);
  }
  return out;
}

bool is_pair_structured(const CircularLayout& layout, const QuerySet& query) {
  if (query.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < query.size(); i += 2) {
    const std::size_t a = query.indices[i];
    const std::size_t b = query.indices[i + 1];
    if (a >= layout.num_sensors() || b >= layout.num_sensors()) return false;
    const std::size_t c = layout.circle_of(a);
    if (layout.circle_of(b) != c) return false;
    const auto& part = layout.partition(c);
    const auto pos = static_cast<std::size_t>(std::find(part.begin(), part.end(), a) - part.begin());
    if (pos % 2 != 0 || part[pos + 1] != b) return false;
  }
  std::vector<std::size_t> sorted = query.indices;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace dynsense
