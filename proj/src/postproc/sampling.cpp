#include "teethseg/postproc/sampling.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "teethseg/error.hpp"
#include "teethseg/spatial_index.hpp"

namespace teethseg::postproc {

std::vector<Index> farthest_point_sampling(const Points& points, int n, Index seed_index) {
  if (n <= 0) throw Error(ErrorCode::invalid_argument, "sample count must be positive");
  if (static_cast<std::size_t>(n) > points.size()) {
    throw Error(ErrorCode::invalid_argument, "sample count exceeds point count");
  }
  if (seed_index < 0 || static_cast<std::size_t>(seed_index) >= points.size()) {
    throw Error(ErrorCode::invalid_index, "seed index out of range");
  }
  std::vector<double> min_dist(points.size(), std::numeric_limits<double>::infinity());
  std::vector<Index> picked{seed_index};
  picked.reserve(n);
  Index last = seed_index;
  while (picked.size() < static_cast<std::size_t>(n)) {
    Index best = -1;
    double best_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      min_dist[i] = std::min(min_dist[i], (points[i] - points[last]).squaredNorm());
      if (min_dist[i] > best_d) {
        best_d = min_dist[i];
        best = static_cast<Index>(i);
      }
    }
    picked.push_back(best);
    last = best;
  }
  return picked;
}

std::vector<Index> boundary_aware_sample(const Points& points, const std::vector<int>& instance_ids, int k_neighbors,
                                         int n_extra, Index seed_index) {
  if (k_neighbors < 2) throw Error(ErrorCode::invalid_argument, "k_neighbors must be >= 2");
  if (instance_ids.size() != points.size()) throw Error(ErrorCode::length_mismatch, "one instance id per point");
  if (n_extra <= 0 || points.empty()) return {};

  SpatialIndex index(points);
  std::vector<Index> boundary;
  std::set<int> ids;
  for (std::size_t i = 0; i < points.size(); ++i) {
    ids.clear();
    for (const auto& nb : index.nearest(points[i], static_cast<std::size_t>(k_neighbors))) {
      ids.insert(instance_ids[nb.index]);
    }
    ids.insert(instance_ids[i]);
    bool has_tooth = ids.size() > 1 || *ids.begin() != 0;
    if (ids.size() >= 2 && has_tooth) boundary.push_back(static_cast<Index>(i));
  }
  if (boundary.empty()) return {};

  Points subset;
  subset.reserve(boundary.size());
  Index local_seed = 0;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    subset.push_back(points[boundary[k]]);
    if (boundary[k] == seed_index) local_seed = static_cast<Index>(k);
  }
  int count = std::min<int>(n_extra, static_cast<int>(boundary.size()));
  auto local = farthest_point_sampling(subset, count, local_seed);
  std::vector<Index> out;
  out.reserve(local.size());
  for (Index k : local) out.push_back(boundary[k]);
  return out;
}

std::vector<Index> grid_subsample(const Points& points, double cell_size) {
  if (!(cell_size > 0.0)) throw Error(ErrorCode::invalid_argument, "cell size must be positive");
  struct Best {
    Index index;
    double dist2;
  };
  std::map<std::array<std::int64_t, 3>, Best> cells;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::array<std::int64_t, 3> key;
    Vec3 center;
    for (int a = 0; a < 3; ++a) {
      double c = std::floor(points[i][a] / cell_size);
      key[a] = static_cast<std::int64_t>(c);
      center[a] = (c + 0.5) * cell_size;
    }
    double d2 = (points[i] - center).squaredNorm();
    auto [it, inserted] = cells.try_emplace(key, Best{static_cast<Index>(i), d2});
    if (!inserted && d2 < it->second.dist2) it->second = {static_cast<Index>(i), d2};
  }
  std::vector<Index> out;
  out.reserve(cells.size());
  for (const auto& [key, best] : cells) out.push_back(best.index);
  return out;
}

}  // namespace teethseg::postproc
