#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "teethseg/types.hpp"

namespace teethseg {

struct Neighbor {
  Index index = 0;
  double distance = 0.0;
};

/// Static 3D point index (R-tree). All query results are sorted by
/// (distance, index), so ties always resolve to the smaller index.
class SpatialIndex {
 public:
  explicit SpatialIndex(const Points& points);
  ~SpatialIndex();
  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;

  /// Points with distance <= radius.
  std::vector<Neighbor> radius(const Vec3& query, double radius) const;
  /// The k nearest points (fewer if the index is smaller).
  std::vector<Neighbor> nearest(const Vec3& query, std::size_t k) const;

  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teethseg
