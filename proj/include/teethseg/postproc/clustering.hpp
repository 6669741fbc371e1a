#pragma once

#include <vector>

#include "teethseg/types.hpp"

namespace teethseg::postproc {

inline constexpr int kNoise = -1;

/// DBSCAN with closed eps-balls (a point counts itself). Core points have at
/// least `min_pts` neighbours; cluster ids are assigned in order of each
/// cluster's first core point, and a border point joins the lowest-id cluster
/// that reaches it.
std::vector<int> dbscan(const Points& points, double eps, std::size_t min_pts);

struct DensityPeaksResult {
  std::vector<Index> centers;      // ranked by decreasing rho * delta
  std::vector<int> assignment;     // per point, position in `centers`
  std::vector<double> rho;
  std::vector<double> delta;
};

/// Density-peaks clustering: rho = neighbours strictly within the cutoff,
/// delta = distance to the nearest point of higher density (equal densities
/// rank by index; the top point gets the largest pairwise distance). The k
/// points with the largest rho * delta become centres and every point joins
/// its nearest centre.
DensityPeaksResult density_peaks(const Points& points, double cutoff_distance, int k);

/// Instance ids from offset-shifted points: masked (gingiva) points and DBSCAN
/// noise get 0, clusters are numbered from 1.
std::vector<int> offset_shift_cluster(const Points& points, const Points& offsets, const std::vector<char>& gingiva_mask,
                                      double eps, std::size_t min_pts);

}  // namespace teethseg::postproc
