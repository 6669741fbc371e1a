#include "teethseg/postproc/clustering.hpp"

#include <algorithm>
#include <numeric>

#include "teethseg/error.hpp"
#include "teethseg/spatial_index.hpp"

namespace teethseg::postproc {

std::vector<int> dbscan(const Points& points, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "dbscan eps must be positive");
  if (min_pts < 1) throw Error(ErrorCode::invalid_argument, "dbscan min_pts must be >= 1");
  const std::size_t n = points.size();
  std::vector<int> cluster(n, kNoise);
  if (n == 0) return cluster;

  SpatialIndex index(points);
  std::vector<std::vector<Index>> neighbors(n);
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : index.radius(points[i], eps)) neighbors[i].push_back(nb.index);
    core[i] = neighbors[i].size() >= min_pts;
  }

  int next_id = 0;
  std::vector<Index> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (!core[s] || cluster[s] != kNoise) continue;
    const int id = next_id++;
    cluster[s] = id;
    queue.assign(1, static_cast<Index>(s));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Index p = queue[head];
      if (!core[p]) continue;
      for (Index q : neighbors[p]) {
        if (cluster[q] != kNoise) continue;
        cluster[q] = id;
        queue.push_back(q);
      }
    }
  }
  return cluster;
}

DensityPeaksResult density_peaks(const Points& points, double cutoff_distance, int k) {
  if (k <= 0) throw Error(ErrorCode::invalid_argument, "density peaks needs k > 0");
  const std::size_t n = points.size();
  if (static_cast<std::size_t>(k) > n) throw Error(ErrorCode::invalid_argument, "k exceeds point count");

  DensityPeaksResult result;
  result.rho.assign(n, 0.0);
  result.delta.assign(n, 0.0);

  SpatialIndex index(points);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : index.radius(points[i], cutoff_distance)) {
      if (nb.index != static_cast<Index>(i) && nb.distance < cutoff_distance) result.rho[i] += 1.0;
    }
  }

  // Rank by density, higher first; equal density ranks by index.
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return result.rho[a] > result.rho[b]; });

  double max_pair = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) max_pair = std::max(max_pair, (points[i] - points[j]).norm());
  }
  for (std::size_t r = 0; r < n; ++r) {
    Index i = order[r];
    if (r == 0) {
      result.delta[i] = max_pair;
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < r; ++s) best = std::min(best, (points[i] - points[order[s]]).norm());
    result.delta[i] = best;
  }

  std::vector<Index> by_gamma(n);
  std::iota(by_gamma.begin(), by_gamma.end(), 0);
  std::stable_sort(by_gamma.begin(), by_gamma.end(), [&](Index a, Index b) {
    return result.rho[a] * result.delta[a] > result.rho[b] * result.delta[b];
  });
  result.centers.assign(by_gamma.begin(), by_gamma.begin() + k);

  result.assignment.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      Index ci = result.centers[c];
      if (ci == static_cast<Index>(i)) {
        result.assignment[i] = c;
        break;
      }
      double d = (points[i] - points[ci]).norm();
      if (d < best) {
        best = d;
        result.assignment[i] = c;
      }
    }
  }
  return result;
}

std::vector<int> offset_shift_cluster(const Points& points, const Points& offsets, const std::vector<char>& gingiva_mask,
                                      double eps, std::size_t min_pts) {
  if (offsets.size() != points.size() || gingiva_mask.size() != points.size()) {
    throw Error(ErrorCode::length_mismatch, "points, offsets and mask must have equal length");
  }
  std::vector<int> ids(points.size(), 0);
  Points shifted;
  std::vector<Index> source;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (gingiva_mask[i]) continue;
    shifted.push_back(points[i] + offsets[i]);
    source.push_back(static_cast<Index>(i));
  }
  if (shifted.empty()) return ids;
  auto clusters = dbscan(shifted, eps, min_pts);
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    if (clusters[k] != kNoise) ids[source[k]] = clusters[k] + 1;
  }
  return ids;
}

}  // namespace teethseg::postproc
