#pragma once

#include <vector>

#include "teethseg/types.hpp"

namespace teethseg::postproc {

/// Greedy max-min sampling from `seed_index`; ties pick the smaller index.
std::vector<Index> farthest_point_sampling(const Points& points, int n, Index seed_index);

/// Points whose k-nearest neighbourhood (the point included) carries at
/// least two distinct instance ids, at least one of them a tooth, thinned by
/// farthest-point sampling to at most `n_extra` points. The seed is
/// `seed_index` when it is a boundary point, otherwise the first boundary
/// point. Returns indices into `points`.
std::vector<Index> boundary_aware_sample(const Points& points, const std::vector<int>& instance_ids, int k_neighbors,
                                         int n_extra, Index seed_index);

/// One point per occupied grid cell (the one closest to the cell centre,
/// ties to the smaller index), cells in (x, y, z) lexicographic order.
std::vector<Index> grid_subsample(const Points& points, double cell_size);

}  // namespace teethseg::postproc
