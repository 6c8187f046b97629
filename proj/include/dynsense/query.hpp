#pragma once

#include <cstddef>
#include <vector>

#include "dynsense/geometry.hpp"
#include "dynsense/rng.hpp"

namespace dynsense {

/// Sensor indices (0-based, distinct) polled by the fusion center.
struct QuerySet {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  bool contains(std::size_t sensor) const;
};

/// Round-robin over circles; step t takes one unconsumed diametric pair from
/// circle t mod n_c, chosen uniformly by `rng`.
QuerySet select_query_circular(const CircularLayout& layout, std::size_t q, Rng& rng);

/// First q cells in column-wise order.
QuerySet select_query_grid(std::size_t num_cells, std::size_t q);

/// The q' indices immediately following the largest used index.
QuerySet select_extra_grid(std::size_t num_cells, const QuerySet& used, std::size_t q_extra);

/// q' sensors drawn uniformly without replacement from the complement of `used`.
QuerySet select_extra_random(std::size_t num_sensors, const QuerySet& used, std::size_t q_extra, Rng& rng);

/// True when the set is a union of diametric pairs (2i, 2i+1) of one partition.
bool is_pair_structured(const CircularLayout& layout, const QuerySet& query);

}  // namespace dynsense
