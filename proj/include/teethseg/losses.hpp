#pragma once

#include <vector>

#include "teethseg/diagnostics.hpp"
#include "teethseg/types.hpp"

namespace teethseg {

inline constexpr double kIgipLambda = 0.2;

struct LossValue {
  double value = 0.0;
  Diagnostics diagnostics;
};

/// Sum over components of 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double smooth_l1(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Mean nearest-neighbour distance from A to B plus from B to A (unsquared).
/// `grad_a`, when given, receives d/dA (B held fixed).
double chamfer_distance(const Points& a, const Points& b, Points* grad_a = nullptr);

struct CentroidTargets {
  Points centroids;
  std::vector<double> radii;  // only used by the offset loss
};

/// Centroid loss of the point-based two-stage method:
/// mean_i[smoothL1(p_i - c1) + lambda |p_i - c1| / |p_i - c2|] + chamfer(P, C),
/// with c1/c2 the nearest and second-nearest targets of p_i (ties by index).
/// A zero separation denominator contributes 0 and adds a diagnostic.
LossValue igip_centroid_loss(const Points& predicted, const Points& targets, double lambda = kIgipLambda,
                             Points* gradient = nullptr);

/// Offset loss with normalised Euclidean and separation terms, averaged over
/// `k`. Targets are ranked by distance from the unshifted point; the gradient
/// is with respect to the offsets.
LossValue champers_centroid_loss(const Points& points, const Points& offsets, const CentroidTargets& targets, int k,
                                 Points* gradient = nullptr);

enum class DiceVariant {
  printed,   // 2 sum(p y) / (sum p^2 + sum p^2 y^2), as published
  standard,  // 1 - 2 sum(p y) / (sum p^2 + sum y^2)
};

/// Batch mean of w0 * dice_term - w1 * sum(y log p). A zero probability on a
/// true class yields +infinity and a diagnostic.
LossValue dice_ce_loss(const std::vector<std::vector<double>>& probabilities,
                       const std::vector<std::vector<double>>& targets, double w0, double w1,
                       DiceVariant variant = DiceVariant::printed);

/// exp(-2 |s - c|).
double patch_distance_weight(const Vec3& sample, const Vec3& centroid);

/// Indices whose predicted distance is at most `threshold`.
std::vector<Index> periphery_filter(const Points& points, const std::vector<double>& predicted_distances,
                                    double threshold);

}  // namespace teethseg
